#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "shadowlab/errors.hpp"

namespace shadowlab {

// The four one-sided growth conditions on a two-sided positive sequence.
// HC/HD compare nu_k against nu_{k+n} over every k; the GH pair cuts the
// index line at zero and looks backward on the nonpositive half.
enum class Cond { HC, HD, GHminus, GHplus };

const char* cond_name(Cond c);

// Log-domain view of a positive two-sided sequence. Extremal searches run
// in log space so windows like e^256 stay far from overflow.
//
// Tabulated sequences are valid on lo..hi only. Closed-form sequences
// provide at() for arbitrary k plus tail metadata:
//   tails_affine: at(k) is exactly affine with slope slope_neg for
//     k <= affine_below and slope_pos for k >= affine_above, which reduces
//     an unbounded extremal search to a finite scan;
//   tails_limit: the slopes hold only as k -> -inf / +inf limits
//     (regularly varying tails); searches widen the scan range and the
//     n-th-root limits still equal exp(-slope).
struct LogSeq {
    std::function<double(std::int64_t)> at;
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    bool closed_form = false;
    bool tails_affine = false;
    bool tails_limit = false;
    double slope_neg = 0.0;
    double slope_pos = 0.0;
    std::int64_t affine_below = 0;
    std::int64_t affine_above = 0;

    std::int64_t span() const { return hi - lo; }
};

struct RateSample {
    int n = 0;
    double r = 0.0;              // extremal ratio^(1/n)
    std::int64_t arg_k = 0;      // k attaining the extremum
    bool at_window_edge = false; // attained strictly at a window-induced edge
};

struct RateEstimate {
    Cond cond = Cond::HC;
    int depth = 0;
    std::vector<RateSample> samples;  // n = 1..depth
    double limit_estimate = 0.0;      // analytic when exact, else windowed_estimate
    double windowed_estimate = 0.0;   // mean of the last-quartile samples
    bool exact = false;
    bool boundary_dominated = false;
};

// Evaluates one condition for the ratio family top(k)/bot(k') in log space.
// Measure sequences pass the same sequence twice; the envelope criterion
// passes top = log M, bot = log m (or the swapped pair). Closed-form pairs
// must share tail slopes side by side, which every bounded-ratio envelope
// pair does by construction.
RateEstimate eval_rate(const LogSeq& top, const LogSeq& bot, Cond cond, int depth);

struct Witness {
    double K = 1.0;
    double t = 1.0;
    Cond cond = Cond::HC;
    // true: samples satisfy a_n <= K t^n; false: a_n >= t^n / K.
    bool le_direction = true;
};

// propbasic-style witness extraction from sampled ratios a_n = r_n^n.
// The <= direction (HC, GH_minus) returns the smallest K >= 1 making
// a_n <= K t^n hold at every sampled n; the >= direction (HD, GH_plus)
// returns the smallest K >= 1 with a_n >= t^n / K. Throws NoWitness when
// the required constant grows monotonically without bound.
Witness find_witness(const RateEstimate& est, double t);

} // namespace shadowlab
