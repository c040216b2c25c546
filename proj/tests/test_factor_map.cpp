#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "shadowlab/density_rn.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/factor_map.hpp"

using namespace shadowlab;

namespace {

std::shared_ptr<const SubCellMeasures> laplace_cells(std::int64_t span = 24) {
    DensityModel m;
    m.family = DensityFamily::Laplace;
    static std::shared_ptr<const SubCellMeasures> cached[2];
    auto& slot = cached[span == 24 ? 0 : 1];
    if (!slot) {
        slot = std::make_shared<SubCellMeasures>(density_cells(
            m, {{"B1", {0.0, 0.5}}, {"B2", {0.5, 1.0}}}, -span, span, 2.0));
    }
    return slot;
}

SimpleFunction base_indicator(std::shared_ptr<const SubCellMeasures> ctx,
                              std::int64_t k, double a = 1.0) {
    std::vector<Piece> pieces;
    for (std::uint32_t i = 0; i < ctx->cells.size(); ++i) {
        pieces.push_back({k, i, a});
    }
    return make_simple(std::move(ctx), std::move(pieces));
}

SimpleFunction random_fn(std::shared_ptr<const SubCellMeasures> ctx, std::mt19937_64& rng,
                         std::int64_t klo, std::int64_t khi) {
    std::uniform_int_distribution<std::int64_t> kpick(klo, khi);
    std::uniform_int_distribution<std::uint32_t> cpick(
        0, static_cast<std::uint32_t>(ctx->cells.size() - 1));
    std::uniform_real_distribution<double> apick(-2.0, 2.0);
    std::uniform_int_distribution<int> npick(1, 10);
    std::vector<Piece> pieces;
    const int n = npick(rng);
    for (int i = 0; i < n; ++i) {
        double a = apick(rng);
        if (a == 0.0) a = 1.0;
        pieces.push_back({kpick(rng), cpick(rng), a});
    }
    return make_simple(std::move(ctx), std::move(pieces));
}

} // namespace

TEST_CASE("simple functions normalize their piece list") {
    auto ctx = laplace_cells();
    const SimpleFunction phi = make_simple(
        ctx, {{2, 1, 0.5}, {-1, 0, 1.0}, {2, 1, 0.25}, {0, 0, 3.0}, {0, 0, -3.0}});
    REQUIRE(phi.pieces.size() == 2);
    CHECK(phi.pieces[0].k == -1);
    CHECK(phi.pieces[1].k == 2);
    CHECK(phi.pieces[1].a == doctest::Approx(0.75));
    CHECK(phi.min_k() == -1);
    CHECK(phi.max_k() == 2);

    CHECK_THROWS_AS(make_simple(ctx, {{0, 7, 1.0}}), BadInput);
    CHECK_THROWS_AS(make_simple(ctx, {{1000, 0, 1.0}}), WindowOverrun);
}

TEST_CASE("norms decompose over pieces and split parts") {
    auto ctx = laplace_cells();
    std::mt19937_64 rng(31337);

    for (int trial = 0; trial < 20; ++trial) {
        const SimpleFunction phi = random_fn(ctx, rng, -10, 10);
        // Oracle: the p-norm is the direct sum over pieces.
        double acc = 0.0;
        for (const Piece& piece : phi.pieces) {
            acc += std::pow(std::abs(piece.a), 2.0) *
                   ctx->cell_mass(piece.cell, piece.k);
        }
        CHECK(sf_norm(phi) == doctest::Approx(std::sqrt(acc)).epsilon(1e-13));

        const auto [minus, plus] = split_pm(phi);
        const double whole = std::pow(sf_norm(phi), 2.0);
        const double parts =
            std::pow(sf_norm(minus), 2.0) + std::pow(sf_norm(plus), 2.0);
        CHECK(whole == doctest::Approx(parts).epsilon(1e-13));
        for (const Piece& piece : minus.pieces) CHECK(piece.k < 0);
        for (const Piece& piece : plus.pieces) CHECK(piece.k >= 0);
    }
}

TEST_CASE("composition shifts the norm masses") {
    auto ctx = laplace_cells();
    std::mt19937_64 rng(8080);
    const SimpleFunction phi = random_fn(ctx, rng, -6, 6);

    const SimpleFunction moved = apply_Tf(phi, 1);
    const SimpleFunction back = apply_Tf(moved, -1);
    CHECK(back.pieces.size() == phi.pieces.size());
    for (std::size_t i = 0; i < phi.pieces.size(); ++i) {
        CHECK(back.pieces[i].k == phi.pieces[i].k);
        CHECK(back.pieces[i].a == phi.pieces[i].a);
    }

    for (std::int64_t k = -4; k <= 4; ++k) {
        CHECK(integral_shift(moved, k) ==
              doctest::Approx(integral_shift(phi, k - 1)).epsilon(1e-13));
    }
}

TEST_CASE("the factor map sends base indicators to scaled unit vectors") {
    auto ctx = laplace_cells();
    const double nu0 = ctx->nu.at(0);

    const SimpleFunction chi = base_indicator(ctx, 0);
    const LpVector x = project_pi(chi);
    CHECK(x.at(0) == doctest::Approx(std::sqrt(nu0)).epsilon(1e-14));
    CHECK(x.norm() == doctest::Approx(std::sqrt(nu0)).epsilon(1e-14));

    // A single sub-cell picks up its mass fraction.
    const SimpleFunction part = make_simple(ctx, {{0, 0, 1.0}});
    const LpVector y = project_pi(part);
    CHECK(y.at(0) ==
          doctest::Approx(std::sqrt(nu0) * ctx->cells[0].mu / ctx->space.mu_w).epsilon(1e-14));
}

TEST_CASE("selector is an isometric right inverse of the factor map") {
    auto ctx = laplace_cells();
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        LpVector x = LpVector::zeros(2.0, -12, 12);
        for (std::int64_t k = -12; k <= 12; ++k) x.ref(k) = coord(rng);

        const SimpleFunction lift = selector(ctx, x);
        CHECK(sf_norm(lift) == doctest::Approx(x.norm()).epsilon(1e-13));

        const LpVector roundtrip = project_pi(lift);
        CHECK(lp_dist(roundtrip, x) <= 1e-12 * x.norm());
    }
}

TEST_CASE("the factor map intertwines composition with the weighted shift") {
    auto ctx = laplace_cells();
    const WeightSequence w = weights_from_measures(ctx->nu, ctx->space.p);
    std::mt19937_64 rng(99);

    for (int trial = 0; trial < 20; ++trial) {
        const SimpleFunction phi = random_fn(ctx, rng, -8, 8);
        const CommutingReport rep = check_commuting(phi, w);
        CHECK(rep.phi_norm == doctest::Approx(sf_norm(phi)).epsilon(1e-13));
        CHECK(rep.residual <= 1e-12 * std::max(1.0, rep.phi_norm));
    }

    SUBCASE("foreign weights are rejected") {
        const SimpleFunction phi = base_indicator(ctx, 0);
        const WeightSequence wrong = constant_weights(2.0, -24, 24);
        CHECK_THROWS_AS(check_commuting(phi, wrong), WeightMismatch);
    }
}

TEST_CASE("membership of the canonical indicators") {
    auto ctx = laplace_cells();
    const double t = std::exp(-1.0);
    const double K_paper = std::exp(2.0);

    SUBCASE("the base cell lies in the nonnegative growth class") {
        const SimpleFunction chi = base_indicator(ctx, 0);
        CHECK(class_membership(chi, UClass::UGHminus, K_paper, t, 12).member);
        // The laplace masses are exactly geometric on the right, so even
        // the constant-one witness works.
        CHECK(class_membership(chi, UClass::UGHminus, 1.0, t, 12).member);
        CHECK_THROWS_AS(class_membership(chi, UClass::UGHplus, K_paper, t, 12),
                        WrongSubspace);
    }

    SUBCASE("its preimage lies in the negative growth class") {
        const SimpleFunction chi = base_indicator(ctx, -1);
        CHECK(class_membership(chi, UClass::UGHplus, K_paper, t, 12).member);
        CHECK_THROWS_AS(class_membership(chi, UClass::UGHminus, K_paper, t, 12),
                        WrongSubspace);
    }

    SUBCASE("two-sided decay defeats the one-rate classes") {
        const SimpleFunction chi = base_indicator(ctx, 0);
        const MembershipReport rep = class_membership(chi, UClass::UC, 10.0, 0.5, 12);
        CHECK(!rep.member);
        CHECK(rep.fail_n >= 1);
        CHECK(rep.lhs > rep.rhs);
    }

    SUBCASE("whole-line classes hold with matching rates") {
        const SimpleFunction chi = base_indicator(ctx, 0);
        CHECK(class_membership(chi, UClass::UC, 1.0 + 1e-9, std::exp(1.0), 12).member);
        CHECK(class_membership(chi, UClass::UD, 1.0 + 1e-9, std::exp(-1.0), 12).member);
    }
}

TEST_CASE("membership is preserved by the closure operations") {
    auto ctx = laplace_cells();
    const double t = std::exp(-1.0);
    const SimpleFunction chi = base_indicator(ctx, 0);
    const double K = std::exp(2.0);

    SUBCASE("nonzero scalars") {
        CHECK(class_membership(sf_scale(chi, -7.5), UClass::UGHminus, K, t, 12).member);
        CHECK(class_membership(sf_scale(chi, 1e-6), UClass::UGHminus, K, t, 12).member);
    }

    SUBCASE("forward images under the inverse map direction") {
        // UGH- membership survives shifting the support deeper into the
        // nonnegative cells.
        const SimpleFunction moved = apply_Tf(chi, -3);
        CHECK(moved.min_k() == 3);
        CHECK(class_membership(moved, UClass::UGHminus, K, t, 12).member);
    }

    SUBCASE("disjoint sums") {
        const SimpleFunction other = sf_scale(base_indicator(ctx, 5), 2.0);
        const SimpleFunction sum = sf_add(chi, other);
        CHECK(class_membership(sum, UClass::UGHminus, K, t, 12).member);
    }
}
