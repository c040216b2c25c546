#pragma once

#include <cstdint>
#include <vector>

#include "shadowlab/measure_core.hpp"
#include "shadowlab/rates.hpp"

namespace shadowlab {

// Finitely supported vector in the p-summable sequence space. The window
// tracks which coordinates are explicitly stored; everything outside is an
// exact zero.
struct LpVector {
    double p = 2.0;
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> x;

    static LpVector zeros(double p, std::int64_t lo, std::int64_t hi);
    static LpVector unit(double p, std::int64_t at);

    bool in_window(std::int64_t k) const { return k >= lo && k <= hi; }
    double at(std::int64_t k) const;
    double& ref(std::int64_t k);
    double norm() const;
    LpVector trimmed() const; // shrink the window to the nonzero support
};

LpVector lp_add(const LpVector& a, const LpVector& b);
LpVector lp_sub(const LpVector& a, const LpVector& b);
LpVector lp_scale(const LpVector& a, double c);
double lp_dist(const LpVector& a, const LpVector& b);

enum class WGenKind { Tabulated, Constant, TwoSided, MeasureDerived };

struct WeightGenerator {
    WGenKind kind = WGenKind::Tabulated;
    double c = 1.0;            // Constant
    double wneg = 1.0;         // TwoSided: w_k = wneg for k <= 0
    double wpos = 1.0;         //           w_k = wpos for k >= 1
    double p = 2.0;            // MeasureDerived
    MeasureGenerator measure;  // MeasureDerived: closed-form mass profile
};

struct WeightSequence {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> w;
    WeightGenerator gen;

    bool in_window(std::int64_t k) const { return k >= lo && k <= hi; }
    bool closed_form() const { return gen.kind != WGenKind::Tabulated; }
    double at(std::int64_t k) const; // window value, else generator value
};

WeightSequence tabulated_weights(std::int64_t lo, std::vector<double> w);
WeightSequence constant_weights(double c, std::int64_t lo, std::int64_t hi);
WeightSequence two_sided_weights(double wneg, double wpos, std::int64_t lo,
                                 std::int64_t hi);

void validate_weights(const WeightSequence& w);

// Weights w_k = (nu_{k-1} / nu_k)^{1/p}, the exact telescoping link between
// the measure ratios and weight-block products.
WeightSequence weights_from_measures(const MeasureSequence& nu, double p);

// Negated log prefix sums: block products become front-and-back differences,
// so weight growth reuses the same condition engine as the measure ratios.
LogSeq weight_log_view(const WeightSequence& w);

enum class GrowthSide { SupAll, InfAll, SupNeg, InfPos };

// Extremal n-th root of the n-term weight block products:
//   SupAll/InfAll over all blocks w_{k+1} ... w_{k+n},
//   SupNeg over blocks ending at k <= 0,
//   InfPos over blocks starting at k+1 >= 1.
double norm_growth(const WeightSequence& w, int n, GrowthSide side);

RateEstimate growth_rates(const WeightSequence& w, GrowthSide side, int depth);

Classification classify_shift(const WeightSequence& w, const ClassifyOptions& opts = {});

// (Tx)_n = w_{n+1} x_{n+1}; the inverse divides, (T^{-1}x)_n = x_{n-1} / w_n.
LpVector apply_shift(const WeightSequence& w, const LpVector& x);
LpVector apply_inverse(const WeightSequence& w, const LpVector& x);

// Index-line split carried by a hyperbolic or split-growth verdict: the
// stable side is {n < split_at} when both sides are present, everything
// when only the stable side exists, nothing when only the unstable one.
struct Splitting {
    bool has_stable = false;
    bool has_unstable = false;
    std::int64_t split_at = 0;

    bool stable_contains(std::int64_t n) const {
        if (!has_stable) return false;
        if (!has_unstable) return true;
        return n < split_at;
    }
};

// Throws NotSplittable for refuted or undecided classifications.
Splitting shift_splitting(const Classification& c);

} // namespace shadowlab
