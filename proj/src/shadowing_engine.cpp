#include "shadowlab/shadowing_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace shadowlab {

namespace {

constexpr std::int64_t kUnboundedLo = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kUnboundedHi = std::numeric_limits<std::int64_t>::max();

// Extremal weight (or inverse weight) over an index range that may be
// unbounded. Generator-backed sequences are constant beyond their affine
// marks, so a scan of the mark neighborhood plus one representative deep
// in each tail is exact; tabulated sequences clamp to their window.
double extremal_weight(const WeightSequence& w, std::int64_t jlo, std::int64_t jhi,
                       bool inverse) {
    if (jlo > jhi) return 0.0;
    double best = 0.0;
    const auto consider = [&](std::int64_t j) {
        const double v = w.at(j);
        best = std::max(best, inverse ? 1.0 / v : v);
    };
    if (!w.closed_form()) {
        const std::int64_t a = std::max(jlo, w.lo);
        const std::int64_t b = std::min(jhi, w.hi);
        for (std::int64_t j = a; j <= b; ++j) consider(j);
        return best;
    }
    std::int64_t mlo = -2, mhi = 3;
    if (w.gen.kind == WGenKind::MeasureDerived) {
        mlo = w.gen.measure.profile.affine_below - 1;
        mhi = w.gen.measure.profile.affine_above + 2;
    }
    const std::int64_t a = std::max(jlo, mlo);
    const std::int64_t b = std::min(jhi, mhi);
    for (std::int64_t j = a; j <= b; ++j) consider(j);
    if (jlo < mlo) consider(std::min(jhi, mlo) - 4);
    if (jhi > mhi) consider(std::max(jlo, mhi) + 4);
    return best;
}

void validate_rates(const SplitOperator& T) {
    if (T.split.has_stable && !(T.rate_stable < 1.0)) {
        std::ostringstream os;
        os << "stable side does not contract: rate " << T.rate_stable;
        throw NotGeneralizedHyperbolic(os.str());
    }
    if (T.split.has_unstable && !(T.rate_unstable < 1.0)) {
        std::ostringstream os;
        os << "unstable side does not expand: inverse rate " << T.rate_unstable;
        throw NotGeneralizedHyperbolic(os.str());
    }
    if (!T.split.has_stable && !T.split.has_unstable) {
        throw NotGeneralizedHyperbolic("split has neither side");
    }
}

struct SplitMix64 {
    std::uint64_t s;

    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits; bit-reproducible everywhere.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

LpVector defect_vector(double p, double delta, std::uint64_t seed, std::int64_t n,
                       std::int64_t noise_lo, std::int64_t noise_hi) {
    LpVector d = LpVector::zeros(p, noise_lo, noise_hi);
    if (delta == 0.0) return d;
    SplitMix64 rng{seed ^ (0xD1B54A32D192ED03ull *
                           static_cast<std::uint64_t>(n + 0x40000000ll))};
    double acc = 0.0;
    for (std::int64_t k = noise_lo; k <= noise_hi; ++k) {
        const double u = 2.0 * rng.unit() - 1.0;
        d.ref(k) = u;
        acc += std::pow(std::abs(u), p);
    }
    if (acc == 0.0) {
        d.ref(noise_lo) = 1.0;
        acc = 1.0;
    }
    const double scale = delta / std::pow(acc, 1.0 / p);
    for (double& v : d.x) v *= scale;
    return d;
}

} // namespace

SplitOperator make_split_operator(const WeightSequence& w, const Splitting& split) {
    validate_weights(w);
    SplitOperator T;
    T.op = SplitOperator::OpKind::Shift;
    T.w = w;
    T.split = split;
    if (split.has_stable) {
        // Transitions internal to {n < s} use w_j for j <= s - 1; with no
        // unstable side the stable side is the whole line.
        const std::int64_t hi = split.has_unstable ? split.split_at - 1 : kUnboundedHi;
        T.rate_stable = extremal_weight(w, kUnboundedLo, hi, false);
    }
    if (split.has_unstable) {
        const std::int64_t lo = split.has_stable ? split.split_at + 1 : kUnboundedLo;
        T.rate_unstable = extremal_weight(w, lo, kUnboundedHi, true);
    }
    validate_rates(T);
    return T;
}

SplitOperator make_diagonal_operator(double c, std::int64_t lo, std::int64_t hi) {
    if (!(c > 0.0) || !std::isfinite(c)) throw BadInput("diagonal factor must be positive");
    SplitOperator T;
    T.op = SplitOperator::OpKind::Diagonal;
    T.w = constant_weights(c, lo, hi);
    if (c < 1.0) {
        T.split.has_stable = true;
        T.rate_stable = c;
    } else if (c > 1.0) {
        T.split.has_unstable = true;
        T.rate_unstable = 1.0 / c;
    } else {
        throw NotGeneralizedHyperbolic("unit diagonal factor has no contracting side");
    }
    return T;
}

LpVector op_apply(const SplitOperator& T, const LpVector& x) {
    if (T.op == SplitOperator::OpKind::Shift) return apply_shift(T.w, x);
    LpVector y = LpVector::zeros(x.p, x.lo, x.hi);
    for (std::int64_t n = x.lo; n <= x.hi; ++n) y.ref(n) = T.w.at(n) * x.at(n);
    return y;
}

LpVector op_apply_inverse(const SplitOperator& T, const LpVector& x) {
    if (T.op == SplitOperator::OpKind::Shift) return apply_inverse(T.w, x);
    LpVector y = LpVector::zeros(x.p, x.lo, x.hi);
    for (std::int64_t n = x.lo; n <= x.hi; ++n) y.ref(n) = x.at(n) / T.w.at(n);
    return y;
}

LpVector project_stable(const SplitOperator& T, const LpVector& x) {
    LpVector y = x;
    for (std::int64_t n = y.lo; n <= y.hi; ++n) {
        if (!T.split.stable_contains(n)) y.ref(n) = 0.0;
    }
    return y;
}

LpVector project_unstable(const SplitOperator& T, const LpVector& x) {
    LpVector y = x;
    for (std::int64_t n = y.lo; n <= y.hi; ++n) {
        if (T.split.stable_contains(n)) y.ref(n) = 0.0;
    }
    return y;
}

const LpVector& PseudoTrajectory::at(std::int64_t n) const {
    if (n < lo || n > hi) throw WindowOverrun(n, "pseudotrajectory");
    return xs[static_cast<std::size_t>(n - lo)];
}

PseudoTrajectory make_pseudotrajectory(const SplitOperator& T, const LpVector& x0,
                                       double delta, std::int64_t lo, std::int64_t hi,
                                       std::uint64_t noise_seed, std::int64_t noise_lo,
                                       std::int64_t noise_hi) {
    if (!(lo <= 0 && 0 <= hi)) throw BadInput("time window must contain 0");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw BadInput("delta must be nonnegative");
    if (noise_lo > noise_hi) throw BadInput("noise window is empty");

    PseudoTrajectory pt;
    pt.p = x0.p;
    pt.delta = delta;
    pt.lo = lo;
    pt.hi = hi;
    pt.noise_seed = noise_seed;
    pt.xs.assign(static_cast<std::size_t>(hi - lo + 1), LpVector{});

    const auto slot = [&](std::int64_t n) -> LpVector& {
        return pt.xs[static_cast<std::size_t>(n - lo)];
    };
    slot(0) = x0;
    for (std::int64_t n = 0; n < hi; ++n) {
        const LpVector d = defect_vector(pt.p, delta, noise_seed, n, noise_lo, noise_hi);
        slot(n + 1) = lp_add(op_apply(T, slot(n)), d);
    }
    for (std::int64_t n = 0; n > lo; --n) {
        const LpVector d = defect_vector(pt.p, delta, noise_seed, n - 1, noise_lo, noise_hi);
        slot(n - 1) = op_apply_inverse(T, lp_sub(slot(n), d));
    }
    return pt;
}

namespace {

// Steps of geometric decay after which the missing tail of the padded
// series drops below tol: rate^J / (1 - rate) * amp <= tol.
std::int64_t tail_steps(double rate, double amp, double tol) {
    if (amp <= 0.0 || rate <= 0.0) return 0;
    const double target = tol * (1.0 - rate) / amp;
    if (target >= 1.0) return 0;
    return static_cast<std::int64_t>(std::ceil(std::log(target) / std::log(rate)));
}

} // namespace

PerturbedOrbit solve_perturbed_orbit(const SplitOperator& T,
                                     const std::vector<LpVector>& zs, std::int64_t z_lo,
                                     double tail_tol) {
    if (zs.empty()) throw BadInput("defect list is empty");
    if (!(tail_tol > 0.0)) throw BadInput("tail tolerance must be positive");
    validate_rates(T);
    const double p = zs.front().p;
    for (const LpVector& z : zs) {
        if (z.p != p) throw BadInput("defects live in different spaces");
    }
    const std::int64_t z_hi = z_lo + static_cast<std::int64_t>(zs.size()) - 1;

    PerturbedOrbit orbit;
    orbit.lo = z_lo;
    orbit.hi = z_hi + 1;
    orbit.K = T.tracking_constant();
    orbit.tail_tol = tail_tol;
    for (const LpVector& z : zs) orbit.sup_defect = std::max(orbit.sup_defect, z.norm());

    const std::size_t count = zs.size() + 1;
    std::vector<LpVector> stable(count), unstable(count);

    // Stable history, summed forward: S_{lo} = 0, S_{n+1} = T S_n + P_M z_n.
    stable[0] = LpVector::zeros(p, 0, 0);
    for (std::size_t i = 0; i + 1 < count; ++i) {
        stable[i + 1] =
            lp_add(op_apply(T, stable[i]), project_stable(T, zs[i])).trimmed();
    }
    // Unstable future, solved backward: U_{hi+1} = 0,
    // U_n = T^{-1}(U_{n+1} + P_N z_n).
    unstable[count - 1] = LpVector::zeros(p, 0, 0);
    for (std::size_t i = count - 1; i-- > 0;) {
        unstable[i] =
            op_apply_inverse(T, lp_add(unstable[i + 1], project_unstable(T, zs[i])))
                .trimmed();
    }

    orbit.ys.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        orbit.ys[i] = lp_sub(stable[i], unstable[i]);
    }

    const std::int64_t j_m = T.split.has_stable
                                 ? tail_steps(T.rate_stable, orbit.sup_defect, tail_tol)
                                 : 0;
    const std::int64_t j_n = T.split.has_unstable
                                 ? tail_steps(T.rate_unstable, orbit.sup_defect, tail_tol)
                                 : 0;
    orbit.certified_lo = z_lo + j_m;
    orbit.certified_hi = z_hi - j_n;
    if (orbit.certified_lo > orbit.certified_hi) {
        throw TailBudgetExceeded(j_m + j_n, z_hi - z_lo + 1);
    }
    return orbit;
}

std::vector<double> verify_shadowing(const SplitOperator& T, const LpVector& seed,
                                     const PseudoTrajectory& pt) {
    std::vector<double> res(static_cast<std::size_t>(pt.hi - pt.lo + 1), 0.0);
    const auto put = [&](std::int64_t n, double v) {
        res[static_cast<std::size_t>(n - pt.lo)] = v;
    };
    LpVector u = seed;
    put(0, lp_dist(u, pt.at(0)));
    for (std::int64_t n = 1; n <= pt.hi; ++n) {
        u = op_apply(T, u);
        put(n, lp_dist(u, pt.at(n)));
    }
    u = seed;
    for (std::int64_t n = -1; n >= pt.lo; --n) {
        u = op_apply_inverse(T, u);
        put(n, lp_dist(u, pt.at(n)));
    }
    return res;
}

ShadowReport shadow(const SplitOperator& T, const PseudoTrajectory& pt, double tail_tol) {
    ShadowReport rep;
    rep.delta = pt.delta;
    rep.tail_tol = tail_tol;
    rep.lo = pt.lo;
    rep.hi = pt.hi;
    rep.K = T.tracking_constant();

    if (pt.lo == pt.hi) {
        rep.seed = pt.at(pt.lo);
        rep.residuals = {0.0};
        rep.certified_lo = pt.lo;
        rep.certified_hi = pt.hi;
        rep.certified_bound = 2.0 * tail_tol;
        return rep;
    }

    std::vector<LpVector> zs;
    zs.reserve(static_cast<std::size_t>(pt.hi - pt.lo));
    for (std::int64_t n = pt.lo; n < pt.hi; ++n) {
        zs.push_back(lp_sub(pt.at(n + 1), op_apply(T, pt.at(n))).trimmed());
    }
    const PerturbedOrbit orbit = solve_perturbed_orbit(T, zs, pt.lo, tail_tol);
    rep.sup_defect = orbit.sup_defect;
    rep.certified_lo = orbit.certified_lo;
    rep.certified_hi = orbit.certified_hi;
    rep.certified_bound = orbit.K * orbit.sup_defect + 2.0 * tail_tol;
    rep.seed =
        lp_sub(pt.at(0), orbit.ys[static_cast<std::size_t>(-pt.lo)]).trimmed();
    rep.residuals = verify_shadowing(T, rep.seed, pt);
    for (double r : rep.residuals) rep.epsilon = std::max(rep.epsilon, r);
    return rep;
}

} // namespace shadowlab
