#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "shadowlab/measure_core.hpp"
#include "shadowlab/shift_ops.hpp"

namespace shadowlab {

// One constant piece a * indicator of the k-th image of a sub-cell.
struct Piece {
    std::int64_t k = 0;
    std::uint32_t cell = 0;
    double a = 0.0;
};

// Finite linear combination of sub-cell indicator images, normalized so
// pieces are sorted by (k, cell), merged, and nonzero.
struct SimpleFunction {
    std::shared_ptr<const SubCellMeasures> ctx;
    std::vector<Piece> pieces;

    bool empty() const { return pieces.empty(); }
    std::int64_t min_k() const;
    std::int64_t max_k() const;
};

SimpleFunction make_simple(std::shared_ptr<const SubCellMeasures> ctx,
                           std::vector<Piece> pieces);

double sf_norm(const SimpleFunction& phi);

SimpleFunction sf_add(const SimpleFunction& a, const SimpleFunction& b);
SimpleFunction sf_scale(const SimpleFunction& a, double c);

// Composition with the underlying map, applied `times` (negative values
// compose with the inverse): every piece moves k -> k - times.
SimpleFunction apply_Tf(const SimpleFunction& phi, std::int64_t times = 1);

// Norm mass of the k-shifted function: I_k = sum |a|^p mass(cell, k + piece.k).
double integral_shift(const SimpleFunction& phi, std::int64_t k);

// Splits into the part supported on negative cells (first) and the part on
// nonnegative cells (second); norms add in the p-th power exactly.
std::pair<SimpleFunction, SimpleFunction> split_pm(const SimpleFunction& phi);

// Factor map onto the sequence space: x_k collects the cell-k coefficients
// against nu_k^{1/p} / mu(W); a one-piece indicator of the base cell maps
// to nu_0^{1/p} times the unit coordinate vector.
LpVector project_pi(const SimpleFunction& phi);

// Isometric right inverse of the factor map: spreads each coordinate over
// every sub-cell at its index.
SimpleFunction selector(std::shared_ptr<const SubCellMeasures> ctx, const LpVector& x);

struct CommutingReport {
    double residual = 0.0; // || pi(T_f phi) - B_w(pi phi) ||
    double phi_norm = 0.0;
};

// Validates that w matches the measure-derived weights on the support range
// (WeightMismatch otherwise), then measures how far the factor map is from
// intertwining the two operators.
CommutingReport check_commuting(const SimpleFunction& phi, const WeightSequence& w);

enum class UClass { UC, UD, UGHplus, UGHminus };

const char* uclass_name(UClass c);

struct MembershipReport {
    bool member = true;
    int fail_n = 0;          // first failing depth, 0 when member
    std::int64_t fail_k = 0; // index attaining the failure or tightest margin
    double lhs = 0.0;        // extremal ratio at that point
    double rhs = 0.0;        // bound it was compared against
};

// Uniform-family membership with constant K and rate t:
//   UC:        sup_k I_k / I_{k+n}        <= K t^n
//   UD:        inf_k I_k / I_{k+n}        >= t^n / K
//   UGH+:      sup_{k<=0} I_{k-n} / I_k   <= K t^n   (negative-cell support)
//   UGH-:      inf_{k>=0} I_k / I_{k+n}   >= t^{-n}/K (nonnegative support)
// Throws WrongSubspace when the support does not match the class.
MembershipReport class_membership(const SimpleFunction& phi, UClass cls, double K,
                                  double t, int depth);

} // namespace shadowlab
