#include "shadowlab/factor_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowlab {

namespace {

constexpr double kWeightRelTol = 1e-12;
constexpr double kMembershipLogSlack = 1e-11;

void require_ctx(const SimpleFunction& phi) {
    if (!phi.ctx) throw BadInput("simple function has no partition context");
}

} // namespace

std::int64_t SimpleFunction::min_k() const {
    if (pieces.empty()) throw BadInput("simple function is zero");
    return pieces.front().k;
}

std::int64_t SimpleFunction::max_k() const {
    if (pieces.empty()) throw BadInput("simple function is zero");
    return pieces.back().k;
}

SimpleFunction make_simple(std::shared_ptr<const SubCellMeasures> ctx,
                           std::vector<Piece> pieces) {
    if (!ctx) throw BadInput("simple function needs a partition context");
    for (const Piece& pc : pieces) {
        if (pc.cell >= ctx->cells.size()) throw BadInput("piece names an unknown sub-cell");
        if (!ctx->nu.in_window(pc.k)) throw WindowOverrun(pc.k, "partition");
        if (!std::isfinite(pc.a)) throw BadInput("piece coefficient must be finite");
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
        return a.k != b.k ? a.k < b.k : a.cell < b.cell;
    });
    std::vector<Piece> merged;
    for (const Piece& pc : pieces) {
        if (!merged.empty() && merged.back().k == pc.k && merged.back().cell == pc.cell) {
            merged.back().a += pc.a;
        } else {
            merged.push_back(pc);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Piece& pc) { return pc.a == 0.0; }),
                 merged.end());
    SimpleFunction phi;
    phi.ctx = std::move(ctx);
    phi.pieces = std::move(merged);
    return phi;
}

double sf_norm(const SimpleFunction& phi) {
    require_ctx(phi);
    const double p = phi.ctx->space.p;
    double acc = 0.0;
    for (const Piece& pc : phi.pieces) {
        acc += std::pow(std::abs(pc.a), p) * phi.ctx->cell_mass(pc.cell, pc.k);
    }
    return std::pow(acc, 1.0 / p);
}

SimpleFunction sf_add(const SimpleFunction& a, const SimpleFunction& b) {
    require_ctx(a);
    require_ctx(b);
    if (a.ctx != b.ctx) throw BadInput("simple functions live on different partitions");
    std::vector<Piece> pieces = a.pieces;
    pieces.insert(pieces.end(), b.pieces.begin(), b.pieces.end());
    return make_simple(a.ctx, std::move(pieces));
}

SimpleFunction sf_scale(const SimpleFunction& a, double c) {
    require_ctx(a);
    std::vector<Piece> pieces = a.pieces;
    for (Piece& pc : pieces) pc.a *= c;
    return make_simple(a.ctx, std::move(pieces));
}

SimpleFunction apply_Tf(const SimpleFunction& phi, std::int64_t times) {
    require_ctx(phi);
    std::vector<Piece> pieces = phi.pieces;
    for (Piece& pc : pieces) pc.k -= times;
    return make_simple(phi.ctx, std::move(pieces));
}

double integral_shift(const SimpleFunction& phi, std::int64_t k) {
    require_ctx(phi);
    const double p = phi.ctx->space.p;
    double acc = 0.0;
    for (const Piece& pc : phi.pieces) {
        acc += std::pow(std::abs(pc.a), p) * phi.ctx->cell_mass(pc.cell, pc.k + k);
    }
    return acc;
}

std::pair<SimpleFunction, SimpleFunction> split_pm(const SimpleFunction& phi) {
    require_ctx(phi);
    std::vector<Piece> neg, nonneg;
    for (const Piece& pc : phi.pieces) {
        (pc.k < 0 ? neg : nonneg).push_back(pc);
    }
    return {make_simple(phi.ctx, std::move(neg)), make_simple(phi.ctx, std::move(nonneg))};
}

LpVector project_pi(const SimpleFunction& phi) {
    require_ctx(phi);
    const double p = phi.ctx->space.p;
    if (phi.pieces.empty()) return LpVector::zeros(p, 0, 0);
    LpVector x = LpVector::zeros(p, phi.min_k(), phi.max_k());
    for (const Piece& pc : phi.pieces) {
        const double nu_root = std::exp(phi.ctx->nu.log_at(pc.k) / p);
        x.ref(pc.k) += nu_root / phi.ctx->space.mu_w * pc.a * phi.ctx->cells[pc.cell].mu;
    }
    return x;
}

SimpleFunction selector(std::shared_ptr<const SubCellMeasures> ctx, const LpVector& x) {
    if (!ctx) throw BadInput("selector needs a partition context");
    if (x.p != ctx->space.p) throw BadInput("vector exponent does not match the partition");
    std::vector<Piece> pieces;
    for (std::int64_t k = x.lo; k <= x.hi; ++k) {
        const double v = x.at(k);
        if (v == 0.0) continue;
        if (!ctx->nu.in_window(k)) throw WindowOverrun(k, "partition");
        const double a = v * std::exp(-ctx->nu.log_at(k) / ctx->space.p);
        for (std::uint32_t i = 0; i < ctx->cells.size(); ++i) {
            pieces.push_back({k, i, a});
        }
    }
    return make_simple(std::move(ctx), std::move(pieces));
}

const char* uclass_name(UClass c) {
    switch (c) {
    case UClass::UC: return "UC";
    case UClass::UD: return "UD";
    case UClass::UGHplus: return "UGH+";
    case UClass::UGHminus: return "UGH-";
    }
    return "?";
}

CommutingReport check_commuting(const SimpleFunction& phi, const WeightSequence& w) {
    require_ctx(phi);
    CommutingReport rep;
    rep.phi_norm = sf_norm(phi);
    if (phi.pieces.empty()) return rep;

    const SubCellMeasures& sc = *phi.ctx;
    const double p = sc.space.p;
    for (std::int64_t k = std::max(phi.min_k(), sc.nu.lo + 1); k <= phi.max_k(); ++k) {
        const double got = w.at(k);
        const double want = std::exp((sc.nu.log_at(k - 1) - sc.nu.log_at(k)) / p);
        if (std::abs(got - want) > kWeightRelTol * std::max(got, want)) {
            throw WeightMismatch(k, got, want);
        }
    }
    const LpVector lhs = project_pi(apply_Tf(phi));
    const LpVector rhs = apply_shift(w, project_pi(phi));
    rep.residual = lp_dist(lhs, rhs);
    return rep;
}

MembershipReport class_membership(const SimpleFunction& phi, UClass cls, double K,
                                  double t, int depth) {
    require_ctx(phi);
    if (!(K > 0.0) || !std::isfinite(K)) throw BadInput("membership constant K must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw BadInput("membership rate t must be positive");
    if (depth < 1) throw BadInput("membership depth must be at least 1");
    if (phi.pieces.empty()) throw BadInput("membership of the zero function is vacuous");

    if (cls == UClass::UGHplus && phi.max_k() >= 0) {
        throw WrongSubspace("function has mass on nonnegative cells");
    }
    if (cls == UClass::UGHminus && phi.min_k() < 0) {
        throw WrongSubspace("function has mass on negative cells");
    }

    // I_k is defined while every piece shift stays inside the mass window.
    const std::int64_t i_lo = phi.ctx->nu.lo - phi.min_k();
    const std::int64_t i_hi = phi.ctx->nu.hi - phi.max_k();
    if (i_lo > i_hi) throw WindowExhausted(depth, i_lo, i_hi);

    std::vector<double> log_i(static_cast<std::size_t>(i_hi - i_lo + 1));
    for (std::int64_t k = i_lo; k <= i_hi; ++k) {
        log_i[static_cast<std::size_t>(k - i_lo)] = std::log(integral_shift(phi, k));
    }
    const auto li = [&](std::int64_t k) {
        return log_i[static_cast<std::size_t>(k - i_lo)];
    };

    const double log_k = std::log(K);
    const double log_t = std::log(t);

    MembershipReport rep;
    double tightest = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= depth; ++n) {
        std::int64_t klo = 0, khi = 0;
        bool sup_side = true;
        double bound_log = 0.0;
        switch (cls) {
        case UClass::UC:
            klo = i_lo;
            khi = i_hi - n;
            sup_side = true;
            bound_log = log_k + n * log_t;
            break;
        case UClass::UD:
            klo = i_lo;
            khi = i_hi - n;
            sup_side = false;
            bound_log = n * log_t - log_k;
            break;
        case UClass::UGHplus:
            klo = i_lo + n;
            khi = std::min<std::int64_t>(0, i_hi);
            sup_side = true;
            bound_log = log_k + n * log_t;
            break;
        case UClass::UGHminus:
            klo = std::max<std::int64_t>(0, i_lo);
            khi = i_hi - n;
            sup_side = false;
            bound_log = -n * log_t - log_k;
            break;
        }
        if (klo > khi) throw WindowExhausted(n, i_lo, i_hi);

        double best = sup_side ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
        std::int64_t arg = klo;
        for (std::int64_t k = klo; k <= khi; ++k) {
            const double g = cls == UClass::UGHplus ? li(k - n) - li(k) : li(k) - li(k + n);
            if (sup_side ? (g > best) : (g < best)) {
                best = g;
                arg = k;
            }
        }
        const double margin = sup_side ? bound_log - best : best - bound_log;
        if (margin < -kMembershipLogSlack) {
            rep.member = false;
            rep.fail_n = n;
            rep.fail_k = arg;
            rep.lhs = std::exp(best);
            rep.rhs = std::exp(bound_log);
            return rep;
        }
        if (margin < tightest) {
            tightest = margin;
            rep.fail_k = arg;
            rep.lhs = std::exp(best);
            rep.rhs = std::exp(bound_log);
        }
    }
    return rep;
}

} // namespace shadowlab
