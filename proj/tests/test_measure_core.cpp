#include <doctest.h>

#include <cmath>
#include <vector>

#include "shadowlab/errors.hpp"
#include "shadowlab/measure_core.hpp"

using namespace shadowlab;

TEST_CASE("geometric mass sequences classify by their ratio") {
    SUBCASE("growing masses contract") {
        const MeasureSequence seq = generated_measures(geometric_generator(2.0), -48, 48);
        validate_measure_sequence(seq);
        const Classification c = classify_measures(seq);
        CHECK(c.kind == Kind::Contraction);
        CHECK(c.exact);
        CHECK(c.hyperbolic);
        REQUIRE(c.stable_rate.has_value());
        CHECK(*c.stable_rate == doctest::Approx(0.5).epsilon(1e-14));
    }

    SUBCASE("shrinking masses dilate") {
        const Classification c =
            classify_measures(generated_measures(geometric_generator(0.5), -48, 48));
        CHECK(c.kind == Kind::Dilation);
        REQUIRE(c.unstable_rate.has_value());
        CHECK(*c.unstable_rate == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("constant masses refute every condition") {
        const Classification c =
            classify_measures(generated_measures(geometric_generator(1.0), -48, 48));
        CHECK(c.kind == Kind::NonShadowing);
        CHECK(c.exact);
        CHECK(!c.hyperbolic);
        CHECK(c.reason.find("refute") != std::string::npos);
    }
}

TEST_CASE("two-sided decay splits into stable and unstable rates") {
    const MeasureSequence seq = generated_measures(expabs_generator(2.0), -48, 48);
    const Classification c = classify_measures(seq);
    CHECK(c.kind == Kind::GeneralizedHyperbolic);
    CHECK(c.exact);
    CHECK(!c.hyperbolic);
    REQUIRE(c.stable_rate.has_value());
    REQUIRE(c.unstable_rate.has_value());
    CHECK(*c.stable_rate == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(*c.unstable_rate == doctest::Approx(2.0).epsilon(1e-14));

    // The four estimates are reported in HC, HD, GH-, GH+ order.
    REQUIRE(c.evidence.size() == 4);
    CHECK(c.evidence[0].cond == Cond::HC);
    CHECK(c.evidence[0].limit_estimate == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.evidence[1].limit_estimate == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tabulated windows classify with the strictness margin") {
    auto tabulate = [](double r) {
        std::vector<double> nu;
        for (std::int64_t k = -40; k <= 40; ++k) {
            nu.push_back(std::pow(r, static_cast<double>(k)));
        }
        return tabulated_measures(-40, std::move(nu));
    };

    SUBCASE("a clear ratio classifies without closed forms") {
        const Classification c = classify_measures(tabulate(0.8), {16, 0.05});
        CHECK(c.kind == Kind::Dilation);
        CHECK(!c.exact);
        REQUIRE(c.unstable_rate.has_value());
        CHECK(*c.unstable_rate == doctest::Approx(1.25).epsilon(1e-9));
    }

    SUBCASE("a ratio inside the margin stays undecided") {
        const Classification c = classify_measures(tabulate(0.98), {16, 0.05});
        CHECK(c.kind == Kind::Inconclusive);
        CHECK(!c.exact);
    }
}

TEST_CASE("log-concave tabulated masses") {
    auto bell = [](double curvature, std::int64_t span) {
        std::vector<double> nu;
        for (std::int64_t k = -span; k <= span; ++k) {
            nu.push_back(std::exp(-curvature * static_cast<double>(k * k)));
        }
        return tabulated_measures(-span, std::move(nu));
    };

    SUBCASE("a gentle bell pins the sup and inf to the data edge") {
        // The split-growth rates e^{+-cn} sit inside the margin, and the
        // contraction/dilation extrema keep moving with the window, so
        // nothing can be decided.
        const Classification c = classify_measures(bell(0.002, 30), {10, 0.05});
        CHECK(c.kind == Kind::Inconclusive);
        REQUIRE(c.evidence.size() == 4);
        CHECK(c.evidence[0].boundary_dominated);
        CHECK(c.evidence[1].boundary_dominated);
        CHECK(c.reason.find("pinned") != std::string::npos);
    }

    SUBCASE("a steep bell splits at the center of the line") {
        // Here the split-growth extrema sit at the structural k = 0 cut,
        // not at the data edge, so the window genuinely certifies them.
        const Classification c = classify_measures(bell(1.0, 12), {10, 0.05});
        CHECK(c.kind == Kind::GeneralizedHyperbolic);
        CHECK(!c.exact);
        REQUIRE(c.evidence.size() == 4);
        CHECK(!c.evidence[2].boundary_dominated);
        CHECK(!c.evidence[3].boundary_dominated);
        CHECK(*c.stable_rate < 0.01);
        CHECK(*c.unstable_rate > 100.0);
    }
}

TEST_CASE("measure validation rejects bad sequences") {
    SUBCASE("nonpositive mass") {
        CHECK_THROWS_AS(tabulated_measures(0, {1.0, 0.0, 1.0}), NonPositiveMeasure);
    }

    SUBCASE("window value drifting off its generator") {
        MeasureSequence seq = generated_measures(geometric_generator(2.0), -4, 4);
        seq.nu[2] *= 1.0 + 1e-6;
        CHECK_THROWS_AS(validate_measure_sequence(seq), GeneratorMismatch);
    }
}

TEST_CASE("proportional sub-cells carry no distortion") {
    const MeasureSequence nu = generated_measures(geometric_generator(2.0), -16, 16);
    const SubCellMeasures sc = proportional_cells(2.0, nu, {{"A", 0.25}, {"B", 0.75}});
    validate_partition(sc);

    CHECK(sc.space.mu_w == doctest::Approx(nu.at(0)).epsilon(1e-15));
    CHECK(sc.cell_mass(0, 5) == doctest::Approx(0.25 * nu.at(5)).epsilon(1e-14));

    const DistortionReport rep = check_bounded_distortion(sc);
    CHECK(rep.K_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.H == doctest::Approx(1.0).epsilon(1e-12));
    // Neighbor mass ratios are 2 and 1/2, so the chain constant is H * 2.
    CHECK(rep.star_c == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("partition validation notices inconsistent cell masses") {
    const MeasureSequence nu = generated_measures(geometric_generator(2.0), -8, 8);
    SubCellMeasures sc = proportional_cells(2.0, nu, {{"A", 0.5}, {"B", 0.5}});
    sc.per_k[0][3] *= 1.0 + 1e-6;
    CHECK_THROWS_AS(validate_partition(sc), InconsistentPartition);

    SUBCASE("theta weights must sum to one") {
        CHECK_THROWS_AS(proportional_cells(2.0, nu, {{"A", 0.5}, {"B", 0.6}}), BadInput);
    }
}
