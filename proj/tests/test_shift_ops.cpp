#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "shadowlab/density_rn.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/shift_ops.hpp"

using namespace shadowlab;

TEST_CASE("p-norms and window arithmetic") {
    LpVector x = LpVector::zeros(1.0, -2, 2);
    x.ref(-2) = 3.0;
    x.ref(0) = -4.0;
    CHECK(x.norm() == doctest::Approx(7.0));

    LpVector y = x;
    y.p = 2.0;
    CHECK(y.norm() == doctest::Approx(5.0));
    y.p = 4.0;
    CHECK(y.norm() == doctest::Approx(std::pow(81.0 + 256.0, 0.25)).epsilon(1e-15));

    const LpVector t = y.trimmed();
    CHECK(t.lo == -2);
    CHECK(t.hi == 0);
    CHECK(lp_dist(t, y) == 0.0);

    const LpVector sum = lp_add(LpVector::unit(2.0, -5), LpVector::unit(2.0, 3));
    CHECK(sum.lo == -5);
    CHECK(sum.hi == 3);
    CHECK(sum.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("weight blocks telescope through the measure ratios") {
    // Oracle first: w_k = (nu_{k-1}/nu_k)^{1/p} makes every block product
    // w_{k+1} ... w_{k+n} collapse to (nu_k / nu_{k+n})^{1/p}. Random
    // positive masses, direct product against the closed ratio.
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> mass(0.1, 4.0);
    std::vector<double> nu_vals;
    for (int i = 0; i < 41; ++i) nu_vals.push_back(mass(rng));
    const MeasureSequence nu = tabulated_measures(-20, nu_vals);

    for (double p : {1.0, 2.0, 4.0}) {
        const WeightSequence w = weights_from_measures(nu, p);
        validate_weights(w);
        CHECK(w.lo == nu.lo + 1);
        CHECK(w.hi == nu.hi);
        for (std::int64_t k = -18; k <= 10; ++k) {
            for (int n = 1; n <= 6; ++n) {
                if (k + n > nu.hi) continue;
                double prod = 1.0;
                for (int j = 1; j <= n; ++j) prod *= w.at(k + j);
                const double ratio = std::pow(nu.at(k) / nu.at(k + n), 1.0 / p);
                CHECK(prod == doctest::Approx(ratio).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("growth rates of structured weights") {
    SUBCASE("constant weights grow at their own value on every side") {
        const WeightSequence w = constant_weights(3.0, -32, 32);
        for (int n : {1, 3, 7}) {
            for (GrowthSide side :
                 {GrowthSide::SupAll, GrowthSide::InfAll, GrowthSide::SupNeg, GrowthSide::InfPos}) {
                CHECK(norm_growth(w, n, side) == doctest::Approx(3.0).epsilon(1e-12));
            }
        }
    }

    SUBCASE("the split pair is exact at every depth") {
        const WeightSequence w = two_sided_weights(0.5, 2.0, -32, 32);
        for (int n : {1, 2, 5, 11}) {
            CHECK(norm_growth(w, n, GrowthSide::SupNeg) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(norm_growth(w, n, GrowthSide::InfPos) == doctest::Approx(2.0).epsilon(1e-12));
        }
        const RateEstimate ghm = growth_rates(w, GrowthSide::SupNeg, 12);
        CHECK(ghm.exact);
        CHECK(ghm.limit_estimate == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("shift classification") {
    SUBCASE("uniformly small weights contract") {
        const Classification c = classify_shift(constant_weights(0.5, -32, 32));
        CHECK(c.kind == Kind::Contraction);
        CHECK(c.exact);
        CHECK(*c.stable_rate == doctest::Approx(0.5).epsilon(1e-14));
    }

    SUBCASE("uniformly large weights dilate") {
        const Classification c = classify_shift(constant_weights(2.0, -32, 32));
        CHECK(c.kind == Kind::Dilation);
        CHECK(*c.unstable_rate == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("contracting past and expanding future split") {
        const Classification c = classify_shift(two_sided_weights(0.5, 2.0, -32, 32));
        CHECK(c.kind == Kind::GeneralizedHyperbolic);
        CHECK(c.exact);
        CHECK(!c.hyperbolic);
        CHECK(c.reason.find("weight growth") != std::string::npos);
    }

    SUBCASE("the reversed pair refutes every condition") {
        const Classification c = classify_shift(two_sided_weights(2.0, 0.5, -32, 32));
        CHECK(c.kind == Kind::NonShadowing);
        CHECK(c.exact);
    }

    SUBCASE("weights derived from laplace masses split like the measures") {
        const DensityModel m{DensityFamily::Laplace, +1, 1.0, 0.0, {}, {}};
        const MeasureSequence nu = measures_from_density(m, -32, 32);
        const Classification c = classify_shift(weights_from_measures(nu, 2.0));
        CHECK(c.kind == Kind::GeneralizedHyperbolic);
        CHECK(c.exact);
        CHECK(*c.stable_rate == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
        CHECK(*c.unstable_rate == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    }
}

TEST_CASE("shift application and its inverse") {
    const WeightSequence w = two_sided_weights(0.5, 2.0, -64, 64);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    LpVector x = LpVector::zeros(2.0, -10, 10);
    for (std::int64_t k = -10; k <= 10; ++k) x.ref(k) = coord(rng);

    const LpVector fwd = apply_shift(w, x);
    CHECK(fwd.lo == x.lo - 1);
    CHECK(fwd.hi == x.hi - 1);
    // (Tx)_n = w_{n+1} x_{n+1}: spot-check against the definition.
    CHECK(fwd.at(3) == doctest::Approx(w.at(4) * x.at(4)).epsilon(1e-15));
    CHECK(fwd.at(-4) == doctest::Approx(w.at(-3) * x.at(-3)).epsilon(1e-15));

    const LpVector back = apply_inverse(w, fwd);
    CHECK(lp_dist(back, x) <= 1e-15 * x.norm());
}

TEST_CASE("splitting follows the verdict") {
    const Classification gh = classify_shift(two_sided_weights(0.5, 2.0, -32, 32));
    const Splitting s = shift_splitting(gh);
    CHECK(s.has_stable);
    CHECK(s.has_unstable);
    CHECK(s.stable_contains(s.split_at - 1));
    CHECK(!s.stable_contains(s.split_at));

    const Classification hc = classify_shift(constant_weights(0.5, -32, 32));
    const Splitting sc = shift_splitting(hc);
    CHECK(sc.has_stable);
    CHECK(!sc.has_unstable);
    CHECK(sc.stable_contains(1 << 20));

    const Classification ns = classify_shift(two_sided_weights(2.0, 0.5, -32, 32));
    CHECK_THROWS_AS(shift_splitting(ns), NotSplittable);
}

TEST_CASE("weight validation rejects corrupt windows") {
    CHECK_THROWS_AS(tabulated_weights(0, {1.0, -2.0}), BadInput);

    WeightSequence w = two_sided_weights(0.5, 2.0, -8, 8);
    w.w[3] *= 1.0 + 1e-6;
    CHECK_THROWS_AS(validate_weights(w), WeightMismatch);
}
