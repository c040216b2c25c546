#include "shadowlab/shift_ops.hpp"

#include <algorithm>
#include <cmath>

namespace shadowlab {

namespace {

constexpr double kGenRelTol = 1e-9;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void validate_p(double p) {
    if (!std::isfinite(p) || p < 1.0) throw BadInput("exponent p must satisfy p >= 1");
}

} // namespace

LpVector LpVector::zeros(double p, std::int64_t lo, std::int64_t hi) {
    validate_p(p);
    if (lo > hi) throw BadInput("vector window is empty");
    LpVector v;
    v.p = p;
    v.lo = lo;
    v.hi = hi;
    v.x.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    return v;
}

LpVector LpVector::unit(double p, std::int64_t at) {
    LpVector v = zeros(p, at, at);
    v.x[0] = 1.0;
    return v;
}

double LpVector::at(std::int64_t k) const {
    if (!in_window(k)) return 0.0;
    return x[static_cast<std::size_t>(k - lo)];
}

double& LpVector::ref(std::int64_t k) {
    if (!in_window(k)) throw WindowOverrun(k, "vector");
    return x[static_cast<std::size_t>(k - lo)];
}

double LpVector::norm() const {
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::abs(v), p);
    return std::pow(acc, 1.0 / p);
}

LpVector LpVector::trimmed() const {
    std::int64_t a = lo, b = hi;
    while (a < b && at(a) == 0.0) ++a;
    while (b > a && at(b) == 0.0) --b;
    LpVector v = zeros(p, a, b);
    for (std::int64_t k = a; k <= b; ++k) v.ref(k) = at(k);
    return v;
}

namespace {

LpVector combine(const LpVector& a, const LpVector& b, double sb) {
    if (a.p != b.p) throw BadInput("vectors live in different spaces");
    LpVector v = LpVector::zeros(a.p, std::min(a.lo, b.lo), std::max(a.hi, b.hi));
    for (std::int64_t k = v.lo; k <= v.hi; ++k) v.ref(k) = a.at(k) + sb * b.at(k);
    return v;
}

} // namespace

LpVector lp_add(const LpVector& a, const LpVector& b) { return combine(a, b, 1.0); }

LpVector lp_sub(const LpVector& a, const LpVector& b) { return combine(a, b, -1.0); }

LpVector lp_scale(const LpVector& a, double c) {
    LpVector v = a;
    for (double& e : v.x) e *= c;
    return v;
}

double lp_dist(const LpVector& a, const LpVector& b) { return lp_sub(a, b).norm(); }

double WeightSequence::at(std::int64_t k) const {
    if (in_window(k)) return w[static_cast<std::size_t>(k - lo)];
    switch (gen.kind) {
    case WGenKind::Constant:
        return gen.c;
    case WGenKind::TwoSided:
        return k <= 0 ? gen.wneg : gen.wpos;
    case WGenKind::MeasureDerived:
        return std::exp((gen.measure.profile.at(k - 1) - gen.measure.profile.at(k)) /
                        gen.p);
    case WGenKind::Tabulated:
        break;
    }
    throw WindowOverrun(k, "weight sequence");
}

WeightSequence tabulated_weights(std::int64_t lo, std::vector<double> w) {
    if (w.empty()) throw BadInput("weight sequence must not be empty");
    WeightSequence seq;
    seq.lo = lo;
    seq.hi = lo + static_cast<std::int64_t>(w.size()) - 1;
    seq.w = std::move(w);
    validate_weights(seq);
    return seq;
}

WeightSequence constant_weights(double c, std::int64_t lo, std::int64_t hi) {
    if (!positive_finite(c)) throw BadInput("weight must be positive");
    if (lo > hi) throw BadInput("weight window is empty");
    WeightSequence seq;
    seq.lo = lo;
    seq.hi = hi;
    seq.w.assign(static_cast<std::size_t>(hi - lo + 1), c);
    seq.gen.kind = WGenKind::Constant;
    seq.gen.c = c;
    return seq;
}

WeightSequence two_sided_weights(double wneg, double wpos, std::int64_t lo,
                                 std::int64_t hi) {
    if (!positive_finite(wneg) || !positive_finite(wpos)) {
        throw BadInput("weight must be positive");
    }
    if (lo > hi) throw BadInput("weight window is empty");
    WeightSequence seq;
    seq.lo = lo;
    seq.hi = hi;
    seq.w.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) {
        seq.w[static_cast<std::size_t>(k - lo)] = k <= 0 ? wneg : wpos;
    }
    seq.gen.kind = WGenKind::TwoSided;
    seq.gen.wneg = wneg;
    seq.gen.wpos = wpos;
    return seq;
}

void validate_weights(const WeightSequence& seq) {
    if (seq.lo > seq.hi) throw BadInput("weight window is empty");
    if (seq.w.size() != static_cast<std::size_t>(seq.hi - seq.lo + 1)) {
        throw BadInput("weight window does not match value count");
    }
    for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
        const double v = seq.w[static_cast<std::size_t>(k - seq.lo)];
        if (!positive_finite(v)) throw BadInput("weight must be positive");
    }
    if (seq.closed_form()) {
        WeightSequence probe = seq;
        probe.lo = 1;
        probe.hi = 0;
        probe.w.clear();
        for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
            const double got = seq.w[static_cast<std::size_t>(k - seq.lo)];
            const double want = probe.at(k);
            if (std::abs(got - want) > kGenRelTol * std::max(got, want)) {
                throw WeightMismatch(k, got, want);
            }
        }
    }
}

WeightSequence weights_from_measures(const MeasureSequence& nu, double p) {
    validate_p(p);
    validate_measure_sequence(nu);
    if (nu.lo + 1 > nu.hi) throw BadInput("measure window too small to derive weights");
    WeightSequence seq;
    seq.lo = nu.lo + 1;
    seq.hi = nu.hi;
    seq.w.resize(static_cast<std::size_t>(seq.hi - seq.lo + 1));
    for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
        seq.w[static_cast<std::size_t>(k - seq.lo)] =
            std::exp((nu.log_at(k - 1) - nu.log_at(k)) / p);
    }
    if (nu.gen.closed_form()) {
        seq.gen.kind = WGenKind::MeasureDerived;
        seq.gen.p = p;
        seq.gen.measure = nu.gen;
    }
    return seq;
}

LogSeq weight_log_view(const WeightSequence& seq) {
    validate_weights(seq);
    LogSeq view;
    switch (seq.gen.kind) {
    case WGenKind::Constant: {
        const double log_c = std::log(seq.gen.c);
        view.at = [log_c](std::int64_t k) { return -static_cast<double>(k) * log_c; };
        view.closed_form = true;
        view.tails_affine = true;
        view.slope_neg = -log_c;
        view.slope_pos = -log_c;
        return view;
    }
    case WGenKind::TwoSided: {
        const double ln = std::log(seq.gen.wneg);
        const double lp = std::log(seq.gen.wpos);
        view.at = [ln, lp](std::int64_t k) {
            return -static_cast<double>(k) * (k <= 0 ? ln : lp);
        };
        view.closed_form = true;
        view.tails_affine = true;
        view.slope_neg = -ln;
        view.slope_pos = -lp;
        return view;
    }
    case WGenKind::MeasureDerived: {
        const LogSeq mass = seq.gen.measure.profile;
        const double p = seq.gen.p;
        view = mass;
        view.at = [mass, p](std::int64_t k) { return mass.at(k) / p; };
        view.slope_neg = mass.slope_neg / p;
        view.slope_pos = mass.slope_pos / p;
        return view;
    }
    case WGenKind::Tabulated: {
        std::vector<double> neg_prefix(seq.w.size() + 1, 0.0);
        for (std::size_t i = 0; i < seq.w.size(); ++i) {
            neg_prefix[i + 1] = neg_prefix[i] - std::log(seq.w[i]);
        }
        view.lo = seq.lo - 1;
        view.hi = seq.hi;
        view.closed_form = false;
        view.at = [vals = std::move(neg_prefix), base = seq.lo - 1](std::int64_t k) {
            return vals[static_cast<std::size_t>(k - base)];
        };
        return view;
    }
    }
    throw BadInput("unknown weight generator");
}

namespace {

Cond side_cond(GrowthSide side) {
    switch (side) {
    case GrowthSide::SupAll: return Cond::HC;
    case GrowthSide::InfAll: return Cond::HD;
    case GrowthSide::SupNeg: return Cond::GHminus;
    case GrowthSide::InfPos: return Cond::GHplus;
    }
    throw BadInput("unknown growth side");
}

} // namespace

double norm_growth(const WeightSequence& w, int n, GrowthSide side) {
    const LogSeq view = weight_log_view(w);
    const RateEstimate est = eval_rate(view, view, side_cond(side), n);
    return est.samples.back().r;
}

RateEstimate growth_rates(const WeightSequence& w, GrowthSide side, int depth) {
    const LogSeq view = weight_log_view(w);
    return eval_rate(view, view, side_cond(side), depth);
}

Classification classify_shift(const WeightSequence& w, const ClassifyOptions& opts) {
    const LogSeq view = weight_log_view(w);
    const RateEstimate hc = eval_rate(view, view, Cond::HC, opts.depth);
    const RateEstimate hd = eval_rate(view, view, Cond::HD, opts.depth);
    const RateEstimate ghm = eval_rate(view, view, Cond::GHminus, opts.depth);
    const RateEstimate ghp = eval_rate(view, view, Cond::GHplus, opts.depth);
    Classification c = classify_from_estimates(hc, hd, ghm, ghp, opts.margin);
    c.reason = "weight growth: " + c.reason;
    return c;
}

LpVector apply_shift(const WeightSequence& w, const LpVector& x) {
    LpVector y = LpVector::zeros(x.p, x.lo - 1, x.hi - 1);
    for (std::int64_t n = y.lo; n <= y.hi; ++n) {
        y.ref(n) = w.at(n + 1) * x.at(n + 1);
    }
    return y;
}

LpVector apply_inverse(const WeightSequence& w, const LpVector& x) {
    LpVector y = LpVector::zeros(x.p, x.lo + 1, x.hi + 1);
    for (std::int64_t n = y.lo; n <= y.hi; ++n) {
        y.ref(n) = x.at(n - 1) / w.at(n);
    }
    return y;
}

Splitting shift_splitting(const Classification& c) {
    Splitting s;
    switch (c.kind) {
    case Kind::Contraction:
        s.has_stable = true;
        return s;
    case Kind::Dilation:
        s.has_unstable = true;
        return s;
    case Kind::GeneralizedHyperbolic:
        s.has_stable = true;
        s.has_unstable = true;
        s.split_at = 0;
        return s;
    case Kind::NonShadowing:
        throw NotSplittable("growth conditions are refuted, no split exists");
    case Kind::Inconclusive:
        throw NotSplittable("classification is inconclusive: " + c.reason);
    }
    throw NotSplittable("unknown classification");
}

} // namespace shadowlab
