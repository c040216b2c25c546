#pragma once

#include <cstdint>
#include <vector>

#include "shadowlab/shift_ops.hpp"

namespace shadowlab {

// Invertible operator together with a stable/unstable index split and the
// contraction rates on the two sides. Shift operators act by
// (Tx)_n = w_{n+1} x_{n+1}; Diagonal ones by (Tx)_n = w_n x_n.
struct SplitOperator {
    enum class OpKind { Shift, Diagonal };

    OpKind op = OpKind::Shift;
    WeightSequence w;
    Splitting split;
    double rate_stable = 0.0;   // norm of T restricted to the stable side
    double rate_unstable = 0.0; // norm of T^{-1} restricted to the unstable side

    double tracking_constant() const {
        return 1.0 / (1.0 - rate_stable) + rate_unstable / (1.0 - rate_unstable);
    }
};

// Computes the side rates from the weights and validates both are below
// one; throws NotGeneralizedHyperbolic otherwise.
SplitOperator make_split_operator(const WeightSequence& w, const Splitting& split);

// Scalar multiple of the identity as a Diagonal operator; splits to the
// stable side when |c| < 1 and the unstable side when |c| > 1.
SplitOperator make_diagonal_operator(double c, std::int64_t lo, std::int64_t hi);

LpVector op_apply(const SplitOperator& T, const LpVector& x);
LpVector op_apply_inverse(const SplitOperator& T, const LpVector& x);
LpVector project_stable(const SplitOperator& T, const LpVector& x);
LpVector project_unstable(const SplitOperator& T, const LpVector& x);

struct PseudoTrajectory {
    double p = 2.0;
    double delta = 0.0;
    std::int64_t lo = 0;
    std::int64_t hi = -1; // time window, contains 0
    std::uint64_t noise_seed = 0;
    std::vector<LpVector> xs;

    const LpVector& at(std::int64_t n) const;
};

// Orbit with one defect per transition: x_{n+1} = T x_n + d_n going
// forward and x_n = T^{-1}(x_{n+1} - d_n) going backward from x_0. Every
// defect has norm exactly delta and support inside [noise_lo, noise_hi];
// delta = 0 produces the exact orbit of x0.
PseudoTrajectory make_pseudotrajectory(const SplitOperator& T, const LpVector& x0,
                                       double delta, std::int64_t lo, std::int64_t hi,
                                       std::uint64_t noise_seed,
                                       std::int64_t noise_lo = -8,
                                       std::int64_t noise_hi = 8);

// Solution y of y_{n+1} - T y_n = z_n built by the two-pass recursion:
// stable history summed forward, unstable future solved backward. The
// recursion holds exactly at every transition; the certified window marks
// where the zero-padded series additionally carries its full geometric
// tail to within tail_tol.
struct PerturbedOrbit {
    std::int64_t lo = 0;
    std::int64_t hi = -1; // y_n for n in [lo, hi]
    std::vector<LpVector> ys;
    std::int64_t certified_lo = 0;
    std::int64_t certified_hi = -1;
    double K = 0.0;
    double tail_tol = 0.0;
    double sup_defect = 0.0;
};

PerturbedOrbit solve_perturbed_orbit(const SplitOperator& T,
                                     const std::vector<LpVector>& zs, std::int64_t z_lo,
                                     double tail_tol);

struct ShadowReport {
    double delta = 0.0;
    double sup_defect = 0.0;
    double epsilon = 0.0;         // max residual over the window
    double K = 0.0;
    double tail_tol = 0.0;
    double certified_bound = 0.0; // K * sup_defect + 2 * tail_tol
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::int64_t certified_lo = 0;
    std::int64_t certified_hi = -1;
    LpVector seed;
    std::vector<double> residuals; // ||T^n seed - x_n||, n in [lo, hi]
};

// Finds the true orbit tracking the pseudotrajectory: solves the defect
// recursion, seeds the orbit at x_0 - y_0, and verifies by iterating T
// both ways from the seed.
ShadowReport shadow(const SplitOperator& T, const PseudoTrajectory& pt, double tail_tol);

// Residuals ||T^n seed - x_n|| for n in [pt.lo, pt.hi], computed by
// explicit forward/backward iteration from the seed.
std::vector<double> verify_shadowing(const SplitOperator& T, const LpVector& seed,
                                     const PseudoTrajectory& pt);

} // namespace shadowlab
