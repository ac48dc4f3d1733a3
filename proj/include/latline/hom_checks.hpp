#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latline/block_function.hpp"
#include "latline/block_ops.hpp"
#include "latline/hom.hpp"

namespace latline {

struct IdentityCheck {
    std::string identity;
    bool holds = false;
    std::string route;   // "materialized", "limit-algebra", "pointwise"
    std::string detail;  // rendered values or cluster sets
};

struct AxiomReport {
    Rational coeff_a;
    Rational coeff_b;
    std::vector<IdentityCheck> checks;

    bool all_hold() const {
        for (const auto& c : checks)
            if (!c.holds) return false;
        return true;
    }
};

// Checks the four homomorphism identities
//
//   phi(f v g) = phi(f) v phi(g)      phi(a f + b g) = a phi(f) + b phi(g)
//   phi(f ^ g) = phi(f) ^ phi(g)      phi(|f|)       = |phi(f)|
//
// exactly. The left side goes through the materialized combination when
// the lattice combine is representable (an independent arithmetic path);
// otherwise it falls back to the per-class limit algebra, where the
// identity is the statement that limits along a residue class commute
// with the fold. Divergent filter limits are compared class by class.
inline AxiomReport check_axioms(const HomSpec& h, const BlockFunction& f, const BlockFunction& g,
                                Rational a = Rational(2, 3), Rational b = Rational(-5, 7)) {
    AxiomReport report{a, b, {}};

    using Fold = std::function<Rational(const Rational&, const Rational&)>;
    auto run = [&](std::string name, std::function<BlockFunction()> materialize, const Fold& fold) {
        IdentityCheck check;
        check.identity = std::move(name);

        std::optional<BlockFunction> combined;
        std::string failure;
        try {
            combined = materialize();
            check.route = "materialized";
        } catch (const Error& e) {
            failure = e.name();
        }

        if (const auto* p = std::get_if<PointEval>(&h)) {
            Rational ft = p->lambda * f.eval(p->t), gt = p->lambda * g.eval(p->t);
            Rational rhs = fold(ft, gt);
            Rational lhs;
            if (combined) {
                lhs = p->lambda * combined->eval(p->t);
            } else {
                lhs = fold(ft, gt);
                check.route = "pointwise (" + failure + ")";
            }
            check.holds = lhs == rhs;
            check.detail = to_string(lhs) + " = " + to_string(rhs);
        } else if (std::holds_alternative<ZeroHom>(h)) {
            Rational rhs = fold(0, 0);
            if (!combined) check.route = "pointwise (" + failure + ")";
            check.holds = rhs == 0;
            check.detail = "0 = " + to_string(rhs);
        } else {
            const auto& fl = std::get<FilterLimit>(h);
            detail::ClassContext ctx;
            ctx.absorb(f);
            ctx.absorb(g);
            ctx.absorb(fl.set);
            if (combined) ctx.absorb(*combined);
            std::vector<Rational> lhs_values, rhs_values;
            bool holds = true;
            for (std::uint64_t n = ctx.n0; n < ctx.n0 + ctx.period; ++n) {
                if (!fl.set.contains(n)) continue;
                Rational rf = fl.lambda * detail::class_ratio_limit(f, fl.c, n);
                Rational rg = fl.lambda * detail::class_ratio_limit(g, fl.c, n);
                Rational rhs = fold(rf, rg);
                Rational lhs = combined
                                   ? fl.lambda * detail::class_ratio_limit(*combined, fl.c, n)
                                   : rhs;
                if (lhs != rhs) holds = false;
                lhs_values.push_back(lhs);
                rhs_values.push_back(rhs);
            }
            if (!combined) check.route = "limit-algebra (" + failure + ")";
            check.holds = holds;
            check.detail = LimitValue::from_clusters(lhs_values).describe() + " = " +
                           LimitValue::from_clusters(rhs_values).describe();
        }
        report.checks.push_back(std::move(check));
    };

    run(
        "join", [&] { return join(f, g); },
        [](const Rational& x, const Rational& y) { return std::max(x, y); });
    run(
        "meet", [&] { return meet(f, g); },
        [](const Rational& x, const Rational& y) { return std::min(x, y); });
    run(
        "linearity", [&] { return affine_combine(a, f, b, g); },
        [&](const Rational& x, const Rational& y) { return a * x + b * y; });
    run(
        "absolute-value", [&] { return latline::abs(f); },
        [](const Rational& x, const Rational&) { return rat_abs(x); });
    return report;
}

// Least integer m <= horizon whose normalized evaluation is eps-close to
// the homomorphism on every listed function: the constructive content of
// the density of {m^{-1} delta_m} among the normalized functionals.
inline std::uint64_t approximate_by_evaluations(const FilterLimit& h,
                                                std::span<const BlockFunction> fs,
                                                const Rational& eps, std::uint64_t horizon) {
    if (h.lambda != 1)
        throw_precondition("NotRenormalized", "the descriptor must be renormalized (lambda = 1)");
    if (!(eps > 0)) throw_precondition("BadRange", "eps must be positive");
    if (horizon < 1) throw_precondition("BadRange", "horizon must be at least 1");

    std::vector<Rational> targets;
    targets.reserve(fs.size());
    for (const auto& f : fs) targets.push_back(evaluate(HomSpec(h), f));

    std::uint64_t best_m = 1;
    Rational best_defect;
    bool have_best = false;

    std::uint64_t m = 1;
    for (std::uint64_t n = 0; m <= horizon; ++n) {
        std::vector<Polyline> blocks;
        blocks.reserve(fs.size());
        for (const auto& f : fs) blocks.push_back(f.block_polyline(n));
        std::vector<std::size_t> seg(fs.size(), 0);
        std::uint64_t block_end = std::min(horizon, (std::uint64_t{2} << n) - 1);
        for (; m <= block_end; ++m) {
            Rational rm(m);
            Rational worst = 0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const auto& pts = blocks[i].points();
                while (pts[seg[i] + 1].x < rm) ++seg[i];
                const Breakpoint& lo = pts[seg[i]];
                const Breakpoint& hi = pts[seg[i] + 1];
                Rational y = lo.y + (rm - lo.x) * (hi.y - lo.y) / (hi.x - lo.x);
                Rational defect = rat_abs(targets[i] - y / rm);
                if (defect > worst) worst = defect;
            }
            if (worst < eps) return m;
            if (!have_best || worst < best_defect) {
                have_best = true;
                best_defect = worst;
                best_m = m;
            }
        }
    }
    throw HorizonExceeded(best_m, best_defect);
}

struct ContinuityReport {
    Rational left_value;
    Rational right_value;
    Rational difference;  // |left - right|
    Rational eps;         // max(|c - d|, difference)
    Rational lipschitz;
    Rational bound;       // eps (1 + L) + L eps
    bool holds = false;
};

// Exact instance of the two-step continuity estimate: the first step
// costs at most eps (1 + L), the second at most L eps, with
// eps = max(|c - d|, |g_A - g_B|) measured from the data itself.
inline ContinuityReport continuity_bound_check(const BlockFunction& f, const Rational& c,
                                               const Rational& d, const EventuallyPeriodicSet& A,
                                               const EventuallyPeriodicSet& B) {
    Rational ga = evaluate(HomSpec(hom_filter(1, c, A)), f);
    Rational gb = evaluate(HomSpec(hom_filter(1, d, B)), f);
    Rational L = lipschitz_constant(f);
    ContinuityReport r;
    r.left_value = ga;
    r.right_value = gb;
    r.difference = rat_abs(ga - gb);
    r.eps = std::max(rat_abs(c - d), r.difference);
    r.lipschitz = L;
    r.bound = r.eps * (1 + L) + L * r.eps;
    r.holds = r.difference <= r.bound;
    return r;
}

}  // namespace latline
