#include "shadowlab/measure_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shadowlab {

namespace {

constexpr double kGenRelTol = 1e-9;
constexpr double kPartitionRelTol = 1e-9;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void validate_space(const SpaceParams& space) {
    if (!std::isfinite(space.p) || space.p < 1.0) {
        throw BadInput("space exponent p must satisfy p >= 1");
    }
    if (!positive_finite(space.mu_w)) {
        throw BadInput("base cell mass must be positive and finite");
    }
}

MeasureGenerator geometric_generator(double r, double nu0) {
    if (!positive_finite(r)) throw BadInput("geometric ratio must be positive");
    if (!positive_finite(nu0)) throw BadInput("geometric scale nu0 must be positive");
    MeasureGenerator gen;
    gen.kind = GenKind::Geometric;
    gen.r = r;
    gen.nu0 = nu0;
    const double log_r = std::log(r);
    const double log_nu0 = std::log(nu0);
    gen.profile.at = [log_r, log_nu0](std::int64_t k) { return log_nu0 + k * log_r; };
    gen.profile.closed_form = true;
    gen.profile.tails_affine = true;
    gen.profile.slope_neg = log_r;
    gen.profile.slope_pos = log_r;
    gen.profile.affine_below = 0;
    gen.profile.affine_above = 0;
    return gen;
}

MeasureGenerator expabs_generator(double c, double nu0) {
    if (!positive_finite(c)) throw BadInput("expabs base must be positive");
    if (!positive_finite(nu0)) throw BadInput("expabs scale nu0 must be positive");
    MeasureGenerator gen;
    gen.kind = GenKind::ExpAbs;
    gen.c = c;
    gen.nu0 = nu0;
    const double log_c = std::log(c);
    const double log_nu0 = std::log(nu0);
    gen.profile.at = [log_c, log_nu0](std::int64_t k) {
        return log_nu0 - std::llabs(k) * log_c;
    };
    gen.profile.closed_form = true;
    gen.profile.tails_affine = true;
    gen.profile.slope_neg = log_c;
    gen.profile.slope_pos = -log_c;
    gen.profile.affine_below = 0;
    gen.profile.affine_above = 0;
    return gen;
}

double MeasureSequence::at(std::int64_t k) const {
    if (in_window(k)) return nu[static_cast<std::size_t>(k - lo)];
    if (gen.closed_form()) return std::exp(gen.profile.at(k));
    throw WindowOverrun(k, "measure sequence");
}

double MeasureSequence::log_at(std::int64_t k) const {
    if (gen.closed_form()) return gen.profile.at(k);
    if (in_window(k)) return std::log(nu[static_cast<std::size_t>(k - lo)]);
    throw WindowOverrun(k, "measure sequence");
}

LogSeq MeasureSequence::log_view() const {
    if (gen.closed_form()) return gen.profile;
    LogSeq view;
    view.lo = lo;
    view.hi = hi;
    view.closed_form = false;
    std::vector<double> logs(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) logs[i] = std::log(nu[i]);
    view.at = [logs = std::move(logs), lo = lo](std::int64_t k) {
        return logs[static_cast<std::size_t>(k - lo)];
    };
    return view;
}

MeasureSequence tabulated_measures(std::int64_t lo, std::vector<double> nu) {
    if (nu.empty()) throw BadInput("measure sequence must not be empty");
    MeasureSequence seq;
    seq.lo = lo;
    seq.hi = lo + static_cast<std::int64_t>(nu.size()) - 1;
    seq.nu = std::move(nu);
    validate_measure_sequence(seq);
    return seq;
}

MeasureSequence generated_measures(const MeasureGenerator& gen, std::int64_t lo,
                                   std::int64_t hi) {
    if (lo > hi) throw BadInput("measure window is empty");
    if (!gen.closed_form()) throw BadInput("generator lacks a closed form");
    MeasureSequence seq;
    seq.lo = lo;
    seq.hi = hi;
    seq.gen = gen;
    seq.nu.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) {
        seq.nu[static_cast<std::size_t>(k - lo)] = std::exp(gen.profile.at(k));
    }
    validate_measure_sequence(seq);
    return seq;
}

void validate_measure_sequence(const MeasureSequence& seq) {
    if (seq.lo > seq.hi) throw BadInput("measure window is empty");
    if (seq.nu.size() != static_cast<std::size_t>(seq.span() + 1)) {
        throw BadInput("measure window does not match value count");
    }
    for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
        const double v = seq.nu[static_cast<std::size_t>(k - seq.lo)];
        if (!positive_finite(v)) throw NonPositiveMeasure(k);
    }
    if (seq.gen.closed_form()) {
        for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
            const double got = seq.nu[static_cast<std::size_t>(k - seq.lo)];
            const double want = std::exp(seq.gen.profile.at(k));
            if (std::abs(got - want) > kGenRelTol * std::max(got, want)) {
                throw GeneratorMismatch(k, got, want);
            }
        }
    }
}

RateEstimate eval_condition(const MeasureSequence& seq, Cond cond, int depth) {
    validate_measure_sequence(seq);
    const LogSeq view = seq.log_view();
    return eval_rate(view, view, cond, depth);
}

const char* kind_name(Kind k) {
    switch (k) {
    case Kind::Contraction: return "Contraction";
    case Kind::Dilation: return "Dilation";
    case Kind::GeneralizedHyperbolic: return "GeneralizedHyperbolic";
    case Kind::NonShadowing: return "NonShadowing";
    case Kind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

bool strictly_below_one(const RateEstimate& est, double margin) {
    if (est.exact) return est.limit_estimate < 1.0;
    return !est.boundary_dominated && est.limit_estimate < 1.0 - margin;
}

bool strictly_above_one(const RateEstimate& est, double margin) {
    if (est.exact) return est.limit_estimate > 1.0;
    return !est.boundary_dominated && est.limit_estimate > 1.0 + margin;
}

std::string inconclusive_reason(const RateEstimate& hc, const RateEstimate& hd,
                                const RateEstimate& ghm, const RateEstimate& ghp) {
    std::ostringstream os;
    os << "no condition decided: limits";
    os << " HC=" << hc.limit_estimate << " HD=" << hd.limit_estimate
       << " GH-=" << ghm.limit_estimate << " GH+=" << ghp.limit_estimate;
    if (hc.boundary_dominated || hd.boundary_dominated || ghm.boundary_dominated ||
        ghp.boundary_dominated) {
        os << "; extrema pinned to the data window edge";
    }
    if (!(hc.exact && hd.exact && ghm.exact && ghp.exact)) {
        os << "; estimates are windowed, not closed form";
    }
    return os.str();
}

} // namespace

Classification classify_from_estimates(const RateEstimate& hc, const RateEstimate& hd,
                                       const RateEstimate& ghm, const RateEstimate& ghp,
                                       double margin) {
    Classification c;
    c.evidence = {hc, hd, ghm, ghp};
    if (strictly_below_one(hc, margin)) {
        c.kind = Kind::Contraction;
        c.stable_rate = hc.limit_estimate;
        c.exact = hc.exact;
        c.hyperbolic = true;
        c.reason = "uniform contraction: n-th roots of the sup ratios settle below one";
        return c;
    }
    if (strictly_above_one(hd, margin)) {
        c.kind = Kind::Dilation;
        c.unstable_rate = hd.limit_estimate;
        c.exact = hd.exact;
        c.hyperbolic = true;
        c.reason = "uniform dilation: n-th roots of the inf ratios settle above one";
        return c;
    }
    if (strictly_below_one(ghm, margin) && strictly_above_one(ghp, margin)) {
        c.kind = Kind::GeneralizedHyperbolic;
        c.stable_rate = ghm.limit_estimate;
        c.unstable_rate = ghp.limit_estimate;
        c.exact = ghm.exact && ghp.exact;
        c.hyperbolic = false;
        c.reason = "split growth: contraction on the nonpositive side, dilation on the nonnegative side";
        return c;
    }
    if (hc.exact && hd.exact && ghm.exact && ghp.exact) {
        c.kind = Kind::NonShadowing;
        c.exact = true;
        c.reason = "closed-form limits refute the contraction, dilation, and split conditions";
        return c;
    }
    c.kind = Kind::Inconclusive;
    c.reason = inconclusive_reason(hc, hd, ghm, ghp);
    return c;
}

Classification classify_measures(const MeasureSequence& seq, const ClassifyOptions& opts) {
    validate_measure_sequence(seq);
    const LogSeq view = seq.log_view();
    const RateEstimate hc = eval_rate(view, view, Cond::HC, opts.depth);
    const RateEstimate hd = eval_rate(view, view, Cond::HD, opts.depth);
    const RateEstimate ghm = eval_rate(view, view, Cond::GHminus, opts.depth);
    const RateEstimate ghp = eval_rate(view, view, Cond::GHplus, opts.depth);
    return classify_from_estimates(hc, hd, ghm, ghp, opts.margin);
}

double SubCellMeasures::cell_mass(std::size_t cell, std::int64_t k) const {
    if (cell >= cells.size()) throw BadInput("sub-cell index out of range");
    if (!nu.in_window(k)) throw WindowOverrun(k, "sub-cell masses");
    return per_k[cell][static_cast<std::size_t>(k - nu.lo)];
}

SubCellMeasures proportional_cells(double p, const MeasureSequence& nu,
                                   const std::vector<std::pair<std::string, double>>& weights) {
    validate_measure_sequence(nu);
    if (!nu.in_window(0)) throw BadInput("partition needs the base cell in the window");
    SpaceParams space;
    space.p = p;
    space.mu_w = nu.nu[static_cast<std::size_t>(-nu.lo)];
    validate_space(space);
    if (weights.empty()) throw BadInput("partition needs at least one sub-cell");
    double total = 0.0;
    for (const auto& [id, theta] : weights) {
        if (id.empty()) throw BadInput("sub-cell id must not be empty");
        if (!positive_finite(theta)) throw BadInput("sub-cell weight must be positive");
        total += theta;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw BadInput("sub-cell weights must sum to one");
    }
    SubCellMeasures sc;
    sc.space = space;
    sc.nu = nu;
    const std::size_t width = nu.nu.size();
    for (const auto& [id, theta] : weights) {
        sc.cells.push_back({id, theta * space.mu_w});
        std::vector<double> row(width);
        for (std::size_t i = 0; i < width; ++i) row[i] = theta * nu.nu[i];
        sc.per_k.push_back(std::move(row));
    }
    validate_partition(sc);
    return sc;
}

void validate_partition(const SubCellMeasures& sc) {
    validate_space(sc.space);
    validate_measure_sequence(sc.nu);
    if (sc.cells.empty()) throw BadInput("partition needs at least one sub-cell");
    if (sc.per_k.size() != sc.cells.size()) {
        throw BadInput("per-cell mass table does not match the cell list");
    }
    const std::size_t width = sc.nu.nu.size();
    for (std::size_t i = 0; i < sc.cells.size(); ++i) {
        if (!positive_finite(sc.cells[i].mu)) {
            throw BadInput("sub-cell base mass must be positive");
        }
        if (sc.per_k[i].size() != width) {
            throw BadInput("per-cell mass table does not match the measure window");
        }
    }
    for (std::int64_t k = sc.nu.lo; k <= sc.nu.hi; ++k) {
        const std::size_t col = static_cast<std::size_t>(k - sc.nu.lo);
        double sum = 0.0;
        for (std::size_t i = 0; i < sc.cells.size(); ++i) {
            const double v = sc.per_k[i][col];
            if (!positive_finite(v)) throw NonPositiveMeasure(k);
            sum += v;
        }
        const double nu_k = sc.nu.nu[col];
        if (std::abs(sum - nu_k) > kPartitionRelTol * std::max(sum, nu_k)) {
            throw InconsistentPartition(k, sum, nu_k);
        }
    }
    if (sc.nu.in_window(0)) {
        const std::size_t col = static_cast<std::size_t>(-sc.nu.lo);
        for (std::size_t i = 0; i < sc.cells.size(); ++i) {
            const double got = sc.per_k[i][col];
            const double want = sc.cells[i].mu;
            if (std::abs(got - want) > kPartitionRelTol * std::max(got, want)) {
                throw InconsistentPartition(0, got, want);
            }
        }
    }
}

DistortionReport check_bounded_distortion(const SubCellMeasures& sc) {
    validate_partition(sc);
    DistortionReport rep;
    rep.K_hat = 1.0;
    rep.worst_cell = sc.cells.front().id;
    rep.worst_k = sc.nu.lo;
    for (std::size_t i = 0; i < sc.cells.size(); ++i) {
        for (std::int64_t k = sc.nu.lo; k <= sc.nu.hi; ++k) {
            const std::size_t col = static_cast<std::size_t>(k - sc.nu.lo);
            const double rho = sc.per_k[i][col] * sc.space.mu_w /
                               (sc.nu.nu[col] * sc.cells[i].mu);
            const double dev = std::max(rho, 1.0 / rho);
            if (dev > rep.K_hat) {
                rep.K_hat = dev;
                rep.worst_cell = sc.cells[i].id;
                rep.worst_k = k;
            }
        }
    }
    rep.H = rep.K_hat * rep.K_hat;
    double neighbor = 0.0;
    for (std::int64_t k = sc.nu.lo; k <= sc.nu.hi; ++k) {
        const std::size_t col = static_cast<std::size_t>(k - sc.nu.lo);
        if (k > sc.nu.lo) {
            neighbor = std::max(neighbor, sc.nu.nu[col - 1] / sc.nu.nu[col]);
        }
        if (k < sc.nu.hi) {
            neighbor = std::max(neighbor, sc.nu.nu[col + 1] / sc.nu.nu[col]);
        }
    }
    rep.star_c = rep.H * neighbor;
    return rep;
}

} // namespace shadowlab
