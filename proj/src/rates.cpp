#include "shadowlab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowlab {

const char* cond_name(Cond c) {
    switch (c) {
    case Cond::HC: return "HC";
    case Cond::HD: return "HD";
    case Cond::GHminus: return "GH_minus";
    case Cond::GHplus: return "GH_plus";
    }
    return "?";
}

namespace {

constexpr double kEdgeSlack = 1e-9;

struct ScanResult {
    double best = 0.0;
    std::int64_t arg = 0;
    bool edge_only = false;
};

// Extremum of g over [klo, khi]. edge_lo/edge_hi mark ends that exist only
// because the data window ran out, as opposed to the structural k = 0 cut
// of the GH conditions; edge_only reports an extremum that every interior
// candidate strictly fails to reach.
template <class G>
ScanResult scan(G&& g, std::int64_t klo, std::int64_t khi, bool maximize,
                bool edge_lo, bool edge_hi) {
    ScanResult res;
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    double interior = best;
    std::int64_t arg = klo;
    for (std::int64_t k = klo; k <= khi; ++k) {
        const double v = g(k);
        if (maximize ? (v > best) : (v < best)) {
            best = v;
            arg = k;
        }
        const bool is_edge = (edge_lo && k == klo) || (edge_hi && k == khi);
        if (!is_edge && (maximize ? (v > interior) : (v < interior))) {
            interior = v;
        }
    }
    res.best = best;
    res.arg = arg;
    const bool arg_is_edge = (edge_lo && arg == klo) || (edge_hi && arg == khi);
    if (arg_is_edge && std::isfinite(best)) {
        res.edge_only = maximize ? (interior < best - kEdgeSlack)
                                 : (interior > best + kEdgeSlack);
    }
    return res;
}

double quartile_mean(const std::vector<RateSample>& samples) {
    const int depth = static_cast<int>(samples.size());
    const int q = std::max(1, depth / 4);
    double acc = 0.0;
    for (int i = depth - q; i < depth; ++i) acc += samples[static_cast<std::size_t>(i)].r;
    return acc / q;
}

double analytic_limit(const LogSeq& top, Cond cond) {
    switch (cond) {
    case Cond::HC: return std::exp(-std::min(top.slope_neg, top.slope_pos));
    case Cond::HD: return std::exp(-std::max(top.slope_neg, top.slope_pos));
    case Cond::GHminus: return std::exp(-top.slope_neg);
    case Cond::GHplus: return std::exp(-top.slope_pos);
    }
    return 1.0;
}

RateEstimate eval_windowed(const LogSeq& top, const LogSeq& bot, Cond cond, int depth) {
    const std::int64_t lo = std::max(top.lo, bot.lo);
    const std::int64_t hi = std::min(top.hi, bot.hi);
    if (lo > hi) throw BadInput("rate evaluation needs a tabulated window");

    switch (cond) {
    case Cond::HC:
    case Cond::HD:
        if (hi - lo < depth) throw WindowExhausted(depth, lo, hi);
        break;
    case Cond::GHminus:
        if (lo + depth > 0 || hi < 0) throw WindowExhausted(depth, lo, hi);
        break;
    case Cond::GHplus:
        if (hi < depth || lo > 0) throw WindowExhausted(depth, lo, hi);
        break;
    }

    RateEstimate est;
    est.cond = cond;
    est.depth = depth;
    int edge_hits = 0;
    for (int n = 1; n <= depth; ++n) {
        ScanResult sr;
        switch (cond) {
        case Cond::HC:
            sr = scan([&](std::int64_t k) { return top.at(k) - bot.at(k + n); },
                      lo, hi - n, true, true, true);
            break;
        case Cond::HD:
            sr = scan([&](std::int64_t k) { return top.at(k) - bot.at(k + n); },
                      lo, hi - n, false, true, true);
            break;
        case Cond::GHminus:
            sr = scan([&](std::int64_t k) { return top.at(k - n) - bot.at(k); },
                      lo + n, std::min<std::int64_t>(0, hi), true, true, false);
            break;
        case Cond::GHplus:
            sr = scan([&](std::int64_t k) { return top.at(k) - bot.at(k + n); },
                      std::max<std::int64_t>(0, lo), hi - n, false, false, true);
            break;
        }
        RateSample s;
        s.n = n;
        s.r = std::exp(sr.best / n);
        s.arg_k = sr.arg;
        s.at_window_edge = sr.edge_only;
        if (sr.edge_only) ++edge_hits;
        est.samples.push_back(s);
    }
    est.windowed_estimate = quartile_mean(est.samples);
    est.limit_estimate = est.windowed_estimate;
    est.exact = false;
    est.boundary_dominated = edge_hits * 2 > depth;
    return est;
}

RateEstimate eval_closed(const LogSeq& top, const LogSeq& bot, Cond cond, int depth) {
    const bool affine = top.tails_affine && bot.tails_affine;
    const bool limit_tails = !affine && (top.tails_limit || bot.tails_limit);

    RateEstimate est;
    est.cond = cond;
    est.depth = depth;
    for (int n = 1; n <= depth; ++n) {
        std::int64_t klo = 0, khi = 0;
        switch (cond) {
        case Cond::HC:
        case Cond::HD:
            klo = std::min(top.affine_below, bot.affine_below - n) - 1;
            khi = std::max(top.affine_above, bot.affine_above - n) + 1;
            break;
        case Cond::GHminus:
            klo = std::min(top.affine_below + n, bot.affine_below) - 1;
            khi = 0;
            break;
        case Cond::GHplus:
            klo = 0;
            khi = std::max(top.affine_above, bot.affine_above - n) + 1;
            break;
        }
        if (limit_tails) {
            const std::int64_t widen = std::max<std::int64_t>(4096, 32 * n);
            if (cond != Cond::GHplus) klo -= widen;
            if (cond != Cond::GHminus) khi += widen;
        }
        if (cond == Cond::GHminus) klo = std::min(klo, khi);
        if (cond == Cond::GHplus) khi = std::max(khi, klo);

        const bool maximize = (cond == Cond::HC || cond == Cond::GHminus);
        ScanResult sr;
        if (cond == Cond::GHminus) {
            sr = scan([&](std::int64_t k) { return top.at(k - n) - bot.at(k); },
                      klo, khi, maximize, false, false);
        } else {
            sr = scan([&](std::int64_t k) { return top.at(k) - bot.at(k + n); },
                      klo, khi, maximize, false, false);
        }
        RateSample s;
        s.n = n;
        s.r = std::exp(sr.best / n);
        s.arg_k = sr.arg;
        est.samples.push_back(s);
    }
    est.windowed_estimate = quartile_mean(est.samples);
    est.exact = affine || limit_tails;
    est.limit_estimate = est.exact ? analytic_limit(top, cond) : est.windowed_estimate;
    est.boundary_dominated = false;
    return est;
}

} // namespace

RateEstimate eval_rate(const LogSeq& top, const LogSeq& bot, Cond cond, int depth) {
    if (depth < 1) throw BadInput("rate depth must be at least 1");
    if (top.closed_form && bot.closed_form) return eval_closed(top, bot, cond, depth);
    return eval_windowed(top, bot, cond, depth);
}

Witness find_witness(const RateEstimate& est, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw BadInput("witness threshold t must be positive");
    if (est.samples.empty()) throw BadInput("witness extraction needs at least one sample");

    const bool le = (est.cond == Cond::HC || est.cond == Cond::GHminus);
    const double log_t = std::log(t);

    // Required log K at each sample:
    //   <=: a_n <= K t^n  iff  log K >= n (log r_n - log t)
    //   >=: a_n >= t^n/K  iff  log K >= n (log t - log r_n)
    std::vector<double> need;
    need.reserve(est.samples.size());
    for (const RateSample& s : est.samples) {
        const double g = s.n * (std::log(s.r) - log_t);
        need.push_back(le ? g : -g);
    }

    const std::size_t count = need.size();
    if (count >= 3) {
        const std::size_t tail = std::max<std::size_t>(2, count / 3);
        bool increasing = true;
        for (std::size_t i = count - tail; i + 1 < count; ++i) {
            if (!(need[i + 1] > need[i] + 1e-12)) {
                increasing = false;
                break;
            }
        }
        const double rise = need.back() - need[count - tail];
        if (increasing && rise > 0.1) {
            throw NoWitness("required constant grows without bound over sampled depths");
        }
    }

    double worst = 0.0;
    for (double g : need) worst = std::max(worst, g);

    Witness w;
    w.K = std::exp(worst);
    w.t = t;
    w.cond = est.cond;
    w.le_direction = le;
    return w;
}

} // namespace shadowlab
