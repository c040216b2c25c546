#include "shadowlab/density_rn.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shadowlab {

const char* family_name(DensityFamily f) {
    switch (f) {
    case DensityFamily::Constant: return "constant";
    case DensityFamily::Exponential: return "exponential";
    case DensityFamily::Laplace: return "laplace";
    case DensityFamily::Cauchy: return "cauchy";
    case DensityFamily::Gaussian: return "gaussian";
    case DensityFamily::Tabulated: return "tabulated";
    }
    return "?";
}

void validate_density(const DensityModel& model) {
    switch (model.family) {
    case DensityFamily::Exponential:
        if (model.sign != 1 && model.sign != -1) {
            throw BadInput("exponential density sign must be +1 or -1");
        }
        break;
    case DensityFamily::Laplace:
        if (!(model.b > 0.0) || !std::isfinite(model.b)) {
            throw BadInput("laplace scale b must be positive");
        }
        if (!std::isfinite(model.lambda)) throw BadInput("laplace location must be finite");
        break;
    case DensityFamily::Tabulated: {
        if (model.xs.size() < 2 || model.xs.size() != model.hs.size()) {
            throw BadInput("tabulated density needs matching xs/hs with at least two nodes");
        }
        for (std::size_t i = 1; i < model.xs.size(); ++i) {
            if (!(model.xs[i] > model.xs[i - 1])) {
                throw BadInput("tabulated density grid must be strictly ascending");
            }
        }
        for (std::size_t i = 0; i < model.hs.size(); ++i) {
            if (!(model.hs[i] > 0.0) || !std::isfinite(model.hs[i])) {
                throw NonPositiveDensity(model.xs[i]);
            }
        }
        break;
    }
    default:
        break;
    }
}

double density_value(const DensityModel& model, double x) {
    switch (model.family) {
    case DensityFamily::Constant:
        return 1.0;
    case DensityFamily::Exponential:
        return std::exp(model.sign * x);
    case DensityFamily::Laplace:
        return std::exp(-std::abs(x - model.lambda) / model.b) / (2.0 * model.b);
    case DensityFamily::Cauchy:
        return 1.0 / (M_PI * (1.0 + x * x));
    case DensityFamily::Gaussian:
        return std::exp(-x * x);
    case DensityFamily::Tabulated: {
        if (x < model.xs.front() || x > model.xs.back()) {
            throw BadInput("tabulated density does not cover the requested point");
        }
        const auto it = std::upper_bound(model.xs.begin(), model.xs.end(), x);
        const std::size_t j = std::min(model.xs.size() - 1,
                                       static_cast<std::size_t>(it - model.xs.begin()));
        const std::size_t i = j == 0 ? 0 : j - 1;
        if (i == j) return model.hs[i];
        const double t = (x - model.xs[i]) / (model.xs[j] - model.xs[i]);
        const double h = model.hs[i] + t * (model.hs[j] - model.hs[i]);
        if (!(h > 0.0)) throw NonPositiveDensity(x);
        return h;
    }
    }
    throw BadInput("unknown density family");
}

double integrate_density(const DensityModel& model, double a, double b) {
    if (!(a < b)) throw BadInput("integration interval is empty");
    // The densities are only piecewise smooth. Split at the known break
    // points so the quadrature sees smooth pieces; dyadic bisection alone
    // stalls on the Laplace kink and the Exponential jump.
    std::vector<double> cuts = {a, b};
    const auto add_cut = [&](double x) {
        if (x > a && x < b) cuts.push_back(x);
    };
    switch (model.family) {
    case DensityFamily::Laplace:
        add_cut(model.lambda);
        break;
    case DensityFamily::Exponential:
        add_cut(0.0);
        break;
    case DensityFamily::Tabulated:
        for (double x : model.xs) add_cut(x);
        break;
    default:
        break;
    }
    std::sort(cuts.begin(), cuts.end());

    double value = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double piece_err = 0.0;
        value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double x) { return density_value(model, x); }, cuts[i], cuts[i + 1], 12,
            1e-12, &piece_err);
        err += piece_err;
    }
    if (!(err <= 1e-9 * std::max(1.0, std::abs(value)))) {
        throw QuadratureFailure(a, b, err);
    }
    return value;
}

namespace {

double cauchy_atan_diff(double a, double b) {
    // atan(b) - atan(a) without cancellation for same-sign arguments.
    const double s = 1.0 + a * b;
    if (s > 0.0) return std::atan((b - a) / s);
    return std::atan(b) - std::atan(a);
}

} // namespace

double density_cell_mass(const DensityModel& model, double a, double b) {
    validate_density(model);
    if (!(a < b)) throw BadInput("cell interval is empty");
    switch (model.family) {
    case DensityFamily::Constant:
        return b - a;
    case DensityFamily::Exponential: {
        const double s = model.sign;
        return (std::exp(s * b) - std::exp(s * a)) / s;
    }
    case DensityFamily::Laplace: {
        const double lam = model.lambda, bs = model.b;
        if (b <= lam) {
            return 0.5 * std::exp((b - lam) / bs) * -std::expm1((a - b) / bs);
        }
        if (a >= lam) {
            return 0.5 * std::exp(-(a - lam) / bs) * -std::expm1(-(b - a) / bs);
        }
        return 1.0 - 0.5 * std::exp(-(b - lam) / bs) - 0.5 * std::exp((a - lam) / bs);
    }
    case DensityFamily::Cauchy:
        return cauchy_atan_diff(a, b) / M_PI;
    case DensityFamily::Gaussian: {
        const double root_pi_half = 0.5 * std::sqrt(M_PI);
        if (a >= 0.0) return root_pi_half * (std::erfc(a) - std::erfc(b));
        if (b <= 0.0) return root_pi_half * (std::erfc(-b) - std::erfc(-a));
        return root_pi_half * (std::erf(b) - std::erf(a));
    }
    case DensityFamily::Tabulated:
        return integrate_density(model, a, b);
    }
    throw BadInput("unknown density family");
}

namespace {

// log of the cell mass over [k, k+1), valid for every integer k without
// underflow. Only the families with usable tails are handled here.
double log_cell_mass(const DensityModel& model, std::int64_t k) {
    switch (model.family) {
    case DensityFamily::Constant:
        return 0.0;
    case DensityFamily::Exponential: {
        const double s = model.sign;
        return s * static_cast<double>(k) + std::log(std::expm1(s) / s);
    }
    case DensityFamily::Laplace: {
        const double lam = model.lambda, bs = model.b;
        const double kd = static_cast<double>(k);
        const double edge = std::log(0.5 * -std::expm1(-1.0 / bs));
        if (kd + 1.0 <= lam) return (kd + 1.0 - lam) / bs + edge;
        if (kd >= lam) return -(kd - lam) / bs + edge;
        return std::log(1.0 - 0.5 * std::exp(-(kd + 1.0 - lam) / bs) -
                        0.5 * std::exp((kd - lam) / bs));
    }
    case DensityFamily::Cauchy: {
        const double kd = static_cast<double>(k);
        return std::log(std::atan(1.0 / (1.0 + kd + kd * kd))) - std::log(M_PI);
    }
    default:
        break;
    }
    throw BadInput("density family has no closed-form log mass");
}

LogSeq density_mass_profile(const DensityModel& model) {
    LogSeq profile;
    const DensityModel captured = model;
    profile.at = [captured](std::int64_t k) { return log_cell_mass(captured, k); };
    profile.closed_form = true;
    switch (model.family) {
    case DensityFamily::Constant:
        profile.tails_affine = true;
        break;
    case DensityFamily::Exponential:
        profile.tails_affine = true;
        profile.slope_neg = model.sign;
        profile.slope_pos = model.sign;
        break;
    case DensityFamily::Laplace:
        profile.tails_affine = true;
        profile.slope_neg = 1.0 / model.b;
        profile.slope_pos = -1.0 / model.b;
        profile.affine_below =
            static_cast<std::int64_t>(std::ceil(model.lambda)) - 2;
        profile.affine_above =
            static_cast<std::int64_t>(std::floor(model.lambda)) + 1;
        break;
    case DensityFamily::Cauchy:
        profile.tails_limit = true;
        break;
    default:
        profile.closed_form = false;
        break;
    }
    return profile;
}

// Closed-form log envelopes of rho_k(x) = h(x+k)/h(x) on [0, 1).

double exp_log_env(int sign, std::int64_t k, bool /*upper*/) {
    return static_cast<double>(sign) * static_cast<double>(k);
}

double laplace_log_env(double b, double lam, std::int64_t k, bool upper) {
    if (k == 0) return 0.0;
    const double A = -lam, B = 1.0 - lam;
    const double kd = static_cast<double>(k);
    const auto g = [&](double u) { return (std::abs(u) - std::abs(u + kd)) / b; };
    if (k > 0) return upper ? g(A) : g(B);
    return upper ? g(B) : g(A);
}

double cauchy_log_env(std::int64_t k, bool upper) {
    if (k == 0) return 0.0;
    const double kd = static_cast<double>(k);
    if (k >= 1) {
        if (upper) {
            return std::log(std::max(1.0 / (1.0 + kd * kd),
                                     2.0 / (1.0 + (kd + 1.0) * (kd + 1.0))));
        }
        // rho_k has its interior minimum at the root of x (x + k) = 1.
        const double xs = 2.0 / (std::hypot(kd, 2.0) + kd);
        return 2.0 * std::log(xs);
    }
    if (upper) return std::log(2.0) - std::log1p((kd + 1.0) * (kd + 1.0));
    return -std::log1p(kd * kd);
}

double gaussian_log_env(std::int64_t k, bool upper) {
    const double kd = static_cast<double>(k);
    if (k == 0) return 0.0;
    const double at0 = -kd * kd;
    const double at1 = -2.0 * kd - kd * kd;
    return upper ? std::max(at0, at1) : std::min(at0, at1);
}

double closed_log_env(const DensityModel& model, std::int64_t k, bool upper) {
    switch (model.family) {
    case DensityFamily::Constant: return 0.0;
    case DensityFamily::Exponential: return exp_log_env(model.sign, k, upper);
    case DensityFamily::Laplace: return laplace_log_env(model.b, model.lambda, k, upper);
    case DensityFamily::Cauchy: return cauchy_log_env(k, upper);
    case DensityFamily::Gaussian: return gaussian_log_env(k, upper);
    case DensityFamily::Tabulated: break;
    }
    throw BadInput("tabulated densities need the adaptive-grid mode");
}

void set_envelope_tails(const DensityModel& model, LogSeq& seq) {
    switch (model.family) {
    case DensityFamily::Constant:
        seq.tails_affine = true;
        break;
    case DensityFamily::Exponential:
        seq.tails_affine = true;
        seq.slope_neg = model.sign;
        seq.slope_pos = model.sign;
        break;
    case DensityFamily::Laplace:
        seq.tails_affine = true;
        seq.slope_neg = 1.0 / model.b;
        seq.slope_pos = -1.0 / model.b;
        seq.affine_below = static_cast<std::int64_t>(std::ceil(model.lambda)) - 2;
        seq.affine_above = static_cast<std::int64_t>(std::floor(model.lambda)) + 1;
        break;
    case DensityFamily::Cauchy:
        seq.tails_limit = true;
        break;
    default:
        // The Gaussian ratio has quadratic log envelopes; no affine tails
        // exist and the bounded-ratio gate rejects it before evaluation.
        break;
    }
}

// Grid minimization/maximization of a continuous function on [0, 1) with a
// few local refinement passes around the best coarse node.
template <class F>
double refine_extremum(F&& f, bool maximize) {
    const double right = 1.0 - 1e-12;
    double lo = 0.0, hi = right;
    double best = f(0.0);
    const int coarse = 4096;
    double arg = 0.0;
    for (int i = 0; i <= coarse; ++i) {
        const double x = std::min(right, static_cast<double>(i) / coarse);
        const double v = f(x);
        if (maximize ? (v > best) : (v < best)) {
            best = v;
            arg = x;
        }
    }
    double step = 1.0 / coarse;
    for (int pass = 0; pass < 5; ++pass) {
        lo = std::max(0.0, arg - step);
        hi = std::min(right, arg + step);
        const int fine = 64;
        for (int i = 0; i <= fine; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / fine;
            const double v = f(x);
            if (maximize ? (v > best) : (v < best)) {
                best = v;
                arg = x;
            }
        }
        step = (hi - lo) / fine;
    }
    return best;
}

} // namespace

Envelopes envelopes(const DensityModel& model, std::int64_t lo, std::int64_t hi,
                    EnvelopeMode mode) {
    validate_density(model);
    if (lo > hi) throw BadInput("envelope window is empty");

    Envelopes env;
    env.lo = lo;
    env.hi = hi;
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    env.m.resize(width);
    env.M.resize(width);

    if (mode == EnvelopeMode::ClosedForm) {
        if (model.family == DensityFamily::Tabulated) {
            throw BadInput("tabulated densities need the adaptive-grid mode");
        }
        env.closed_form = true;
        env.ratio_unbounded = (model.family == DensityFamily::Gaussian);
        for (std::int64_t k = lo; k <= hi; ++k) {
            const std::size_t i = static_cast<std::size_t>(k - lo);
            env.m[i] = std::exp(closed_log_env(model, k, false));
            env.M[i] = std::exp(closed_log_env(model, k, true));
        }
        const DensityModel captured = model;
        const bool gaussian = (model.family == DensityFamily::Gaussian);
        env.log_m.at = [captured](std::int64_t k) { return closed_log_env(captured, k, false); };
        env.log_M.at = [captured](std::int64_t k) { return closed_log_env(captured, k, true); };
        env.log_m.lo = env.log_M.lo = lo;
        env.log_m.hi = env.log_M.hi = hi;
        // Gaussian envelopes fall back to windowed evaluation; their gate
        // fires before any condition is evaluated anyway.
        env.log_m.closed_form = env.log_M.closed_form = !gaussian;
        set_envelope_tails(model, env.log_m);
        set_envelope_tails(model, env.log_M);
        return env;
    }

    env.closed_form = false;
    env.unverified = true;
    const double widen = 1.0 + 1e-6;
    std::vector<double> log_m(width), log_M(width);
    for (std::int64_t k = lo; k <= hi; ++k) {
        const auto ratio = [&](double x) {
            return density_value(model, x + static_cast<double>(k)) /
                   density_value(model, x);
        };
        const std::size_t i = static_cast<std::size_t>(k - lo);
        const double lo_val = refine_extremum(ratio, false) / widen;
        const double hi_val = refine_extremum(ratio, true) * widen;
        if (!(lo_val > 0.0) || !std::isfinite(hi_val)) {
            throw NonPositiveDensity(static_cast<double>(k));
        }
        env.m[i] = lo_val;
        env.M[i] = hi_val;
        log_m[i] = std::log(lo_val);
        log_M[i] = std::log(hi_val);
    }
    env.log_m.lo = env.log_M.lo = lo;
    env.log_m.hi = env.log_M.hi = hi;
    env.log_m.at = [vals = std::move(log_m), lo](std::int64_t k) {
        return vals[static_cast<std::size_t>(k - lo)];
    };
    env.log_M.at = [vals = std::move(log_M), lo](std::int64_t k) {
        return vals[static_cast<std::size_t>(k - lo)];
    };
    return env;
}

RatioBoundReport check_bounded_ratio(const DensityModel& model, std::int64_t scan) {
    validate_density(model);
    if (scan < 1) throw BadInput("ratio scan depth must be at least 1");
    RatioBoundReport rep;
    switch (model.family) {
    case DensityFamily::Constant:
    case DensityFamily::Exponential:
        rep.bound = 1.0;
        rep.exact = true;
        rep.detail = "envelopes coincide at every k";
        return rep;
    case DensityFamily::Gaussian:
        rep.bounded = false;
        rep.exact = true;
        rep.detail = "envelope ratio M_k/m_k = exp(2|k|) diverges";
        return rep;
    case DensityFamily::Laplace:
    case DensityFamily::Cauchy: {
        // Laplace ratios are constant beyond the affine marks around the
        // location, Cauchy ratios decay monotonically toward 2 in both
        // tails, so a scan of the right finite range is the exact sup.
        std::int64_t klo = -scan, khi = scan;
        if (model.family == DensityFamily::Laplace) {
            klo = static_cast<std::int64_t>(std::ceil(model.lambda)) - 4;
            khi = static_cast<std::int64_t>(std::floor(model.lambda)) + 4;
        }
        double best_log = 0.0;
        std::int64_t arg = 0;
        for (std::int64_t k = klo; k <= khi; ++k) {
            const double v = closed_log_env(model, k, true) - closed_log_env(model, k, false);
            if (v > best_log) {
                best_log = v;
                arg = k;
            }
        }
        rep.bound = std::exp(best_log);
        rep.attained_k = arg;
        rep.exact = true;
        rep.detail = model.family == DensityFamily::Laplace
                         ? "ratio is constant beyond the affine tail marks"
                         : "ratio decays toward 2 in both tails";
        return rep;
    }
    case DensityFamily::Tabulated: {
        const std::int64_t cover_lo =
            static_cast<std::int64_t>(std::ceil(model.xs.front()));
        const std::int64_t cover_hi =
            static_cast<std::int64_t>(std::floor(model.xs.back() - 1.0));
        const std::int64_t lo = std::max(cover_lo, -scan);
        const std::int64_t hi = std::min(cover_hi, scan);
        if (lo > hi) throw BadInput("tabulated density grid covers no whole cell shift");
        const Envelopes env = envelopes(model, lo, hi, EnvelopeMode::AdaptiveGrid);
        double best = 1.0;
        std::int64_t arg = 0;
        for (std::int64_t k = lo; k <= hi; ++k) {
            const std::size_t i = static_cast<std::size_t>(k - lo);
            const double v = env.M[i] / env.m[i];
            if (v > best) {
                best = v;
                arg = k;
            }
        }
        rep.bound = best;
        rep.attained_k = arg;
        rep.exact = false;
        std::ostringstream os;
        os << "windowed bound over k in [" << lo << ", " << hi << "] only";
        rep.detail = os.str();
        return rep;
    }
    }
    throw BadInput("unknown density family");
}

RateEstimate eval_rn_condition(const Envelopes& env, Cond cond, int depth,
                               bool swap_envelopes) {
    if (env.ratio_unbounded) {
        throw HypothesisViolated("envelope ratio M_k/m_k is unbounded");
    }
    const bool sup_side = (cond == Cond::HC || cond == Cond::GHminus);
    const bool top_is_M = sup_side != swap_envelopes;
    const LogSeq& top = top_is_M ? env.log_M : env.log_m;
    const LogSeq& bot = top_is_M ? env.log_m : env.log_M;
    return eval_rate(top, bot, cond, depth);
}

Classification classify_density(const DensityModel& model,
                                const DensityClassifyOptions& opts) {
    validate_density(model);
    const RatioBoundReport ratio = check_bounded_ratio(model);
    if (!ratio.bounded) {
        Classification c;
        c.kind = Kind::Inconclusive;
        c.exact = false;
        c.reason = "bounded-ratio hypothesis violated: " + ratio.detail;
        return c;
    }
    const EnvelopeMode mode = model.family == DensityFamily::Tabulated
                                  ? EnvelopeMode::AdaptiveGrid
                                  : opts.mode;
    std::int64_t wlo = -opts.window, whi = opts.window;
    if (model.family == DensityFamily::Tabulated) {
        wlo = std::max(wlo, static_cast<std::int64_t>(std::ceil(model.xs.front())));
        whi = std::min(whi, static_cast<std::int64_t>(std::floor(model.xs.back() - 1.0)));
    }
    const Envelopes env = envelopes(model, wlo, whi, mode);
    const RateEstimate hc = eval_rn_condition(env, Cond::HC, opts.depth, opts.swap_envelopes);
    const RateEstimate hd = eval_rn_condition(env, Cond::HD, opts.depth, opts.swap_envelopes);
    const RateEstimate ghm =
        eval_rn_condition(env, Cond::GHminus, opts.depth, opts.swap_envelopes);
    const RateEstimate ghp =
        eval_rn_condition(env, Cond::GHplus, opts.depth, opts.swap_envelopes);
    Classification c = classify_from_estimates(hc, hd, ghm, ghp, opts.margin);
    c.reason = "envelope criterion: " + c.reason;
    return c;
}

MeasureSequence measures_from_density(const DensityModel& model, std::int64_t lo,
                                      std::int64_t hi) {
    validate_density(model);
    if (lo > hi) throw BadInput("measure window is empty");
    MeasureSequence seq;
    seq.lo = lo;
    seq.hi = hi;
    seq.nu.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) {
        seq.nu[static_cast<std::size_t>(k - lo)] =
            density_cell_mass(model, static_cast<double>(k), static_cast<double>(k) + 1.0);
    }
    seq.gen.kind = GenKind::Density;
    seq.gen.density_tag = family_name(model.family);
    seq.gen.profile = density_mass_profile(model);
    validate_measure_sequence(seq);
    return seq;
}

SubCellMeasures density_cells(
    const DensityModel& model,
    const std::vector<std::pair<std::string, std::pair<double, double>>>& intervals,
    std::int64_t lo, std::int64_t hi, double p) {
    validate_density(model);
    if (intervals.empty()) throw BadInput("partition needs at least one sub-cell");
    double cursor = 0.0;
    for (const auto& [id, ab] : intervals) {
        if (id.empty()) throw BadInput("sub-cell id must not be empty");
        if (std::abs(ab.first - cursor) > 1e-12 || !(ab.second > ab.first)) {
            throw BadInput("sub-cell intervals must tile [0, 1) in order");
        }
        cursor = ab.second;
    }
    if (std::abs(cursor - 1.0) > 1e-12) {
        throw BadInput("sub-cell intervals must tile [0, 1) in order");
    }

    SubCellMeasures sc;
    sc.nu = measures_from_density(model, lo, hi);
    sc.space.p = p;
    sc.space.mu_w = density_cell_mass(model, 0.0, 1.0);
    validate_space(sc.space);
    const std::size_t width = sc.nu.nu.size();
    for (const auto& [id, ab] : intervals) {
        std::vector<double> row(width);
        for (std::int64_t k = lo; k <= hi; ++k) {
            row[static_cast<std::size_t>(k - lo)] =
                density_cell_mass(model, ab.first + static_cast<double>(k),
                                  ab.second + static_cast<double>(k));
        }
        sc.cells.push_back({id, density_cell_mass(model, ab.first, ab.second)});
        sc.per_k.push_back(std::move(row));
    }
    validate_partition(sc);
    return sc;
}

} // namespace shadowlab
