#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "latline/block_function.hpp"
#include "latline/errors.hpp"
#include "latline/polyline.hpp"
#include "latline/rational.hpp"

namespace latline {
namespace detail {

// Eventual sign of v(n) = a*2^n + b*n + d together with the least index
// from which the sign is locked. Decided lexicographically on (a, b, d);
// the sign is zero only for the zero triple.
struct EventualSign {
    int sign = 0;
    std::uint64_t from = 0;
};

inline EventualSign eventual_sign(const AnchorValue& v) {
    if (v.a != 0) {
        Rational A = rat_abs(v.a), B = rat_abs(v.b), D = rat_abs(v.d);
        std::uint64_t n = 0;
        Rational p = 1;  // 2^n
        // Once |a| 2^n exceeds |b| n + |d| and |b| at the same time, doubling
        // keeps it ahead of the linear term forever.
        while (!(A * p > B * Rational(n) + D && A * p >= B)) {
            ++n;
            p *= 2;
        }
        return {rat_sign(v.a), n};
    }
    if (v.b != 0) {
        Rational cross = -v.d / v.b;  // b*n + d has the sign of b for n > cross
        Integer first = floor_int(cross) + 1;
        std::uint64_t from = first <= 0 ? 0 : static_cast<std::uint64_t>(first);
        return {rat_sign(v.b), from};
    }
    return {rat_sign(v.d), 0};
}

// Least index from which h(n) = (beta*n + gamma)/2^n keeps a constant sign
// and |h| is non-increasing. From n with sign(beta*n+gamma) = sign(beta)
// and |beta*n+gamma| >= |beta| we get |beta(n+1)+gamma| = |beta n+gamma| +
// |beta| <= 2|beta n+gamma|, and both conditions persist.
inline std::uint64_t tail_monotone_from(const Rational& beta, const Rational& gamma) {
    if (beta == 0) return 0;
    Integer first = ceil_int(1 - gamma / beta);
    return first <= 0 ? 0 : static_cast<std::uint64_t>(first);
}

// Exact sup over n in [0, infinity) of a family of block statistics, each
// of the form |alpha + (beta*n + gamma)/2^n| restricted to the blocks that
// use one particular template. Callers feed (a) a numeric scan bound and
// evaluator covering every n up to the bound, and (b) the tail limits
// |alpha|; past each family's monotone threshold the value is squeezed
// between a scanned element and its limit, so the max of both parts is the
// exact sup.
struct SupAccumulator {
    Rational best = 0;
    void feed(const Rational& v) {
        if (v > best) best = v;
    }
};

inline std::vector<std::size_t> realized_templates(const BlockFunction& f) {
    std::set<std::size_t> seen;
    std::uint64_t n0 = f.joint_preperiod();
    for (std::uint64_t n = n0; n < n0 + f.joint_period(); ++n) seen.insert(f.template_index_at(n));
    return {seen.begin(), seen.end()};
}

}  // namespace detail

// Exact best Lipschitz constant. Each segment's slope on block n is
// da/dc + (db*n + dd)/(dc*2^n); its sup over n is attained at a scanned
// index or approached at the limit |da/dc|, both computed exactly.
inline Rational lipschitz_constant(const BlockFunction& f) {
    detail::SupAccumulator sup;
    std::uint64_t scan_to = f.joint_preperiod();
    for (std::size_t id : detail::realized_templates(f)) {
        const auto& anchors = f.templates()[id].anchors();
        for (std::size_t j = 1; j < anchors.size(); ++j) {
            AnchorValue dv = anchors[j].value - anchors[j - 1].value;
            Rational dc = anchors[j].c - anchors[j - 1].c;
            sup.feed(rat_abs(dv.a / dc));
            scan_to = std::max(scan_to, detail::tail_monotone_from(dv.b / dc, dv.d / dc));
        }
    }
    scan_to += f.joint_period();
    for (std::uint64_t n = 0; n <= scan_to; ++n) {
        const auto& anchors = f.template_at(n).anchors();
        Rational scale = rat_pow2(n);
        for (std::size_t j = 1; j < anchors.size(); ++j) {
            Rational rise = anchors[j].value.at(n) - anchors[j - 1].value.at(n);
            Rational run = (anchors[j].c - anchors[j - 1].c) * scale;
            sup.feed(rat_abs(rise / run));
        }
    }
    return sup.best;
}

// limsup of |f(t)|/t: on each segment f(t)/t is monotone in t, so only
// anchor ratios matter, and the bounded terms vanish in the limit, leaving
// |a|/c over recurrent anchors.
inline Rational growth_rate(const BlockFunction& f) {
    detail::SupAccumulator sup;
    for (std::size_t id : detail::realized_templates(f))
        for (const BlockAnchor& a : f.templates()[id].anchors()) sup.feed(rat_abs(a.value.a) / a.c);
    return sup.best;
}

// Bounded iff no recurrent anchor grows: all recurrent a and b vanish.
inline bool is_bounded(const BlockFunction& f) {
    for (std::size_t id : detail::realized_templates(f))
        for (const BlockAnchor& a : f.templates()[id].anchors())
            if (a.value.a != 0 || a.value.b != 0) return false;
    return true;
}

// Exact c > 0 with c*|f(t)| <= t for all t >= 1, i.e. 1 / sup |f(t)|/t.
// The sup runs over anchors only (per-segment monotonicity again) and is
// computed like the Lipschitz sup. Returns 1 for the zero function.
inline Rational domination_coefficient(const BlockFunction& f) {
    detail::SupAccumulator sup;
    std::uint64_t scan_to = f.joint_preperiod();
    for (std::size_t id : detail::realized_templates(f)) {
        for (const BlockAnchor& a : f.templates()[id].anchors()) {
            sup.feed(rat_abs(a.value.a) / a.c);
            scan_to = std::max(scan_to, detail::tail_monotone_from(a.value.b / a.c, a.value.d / a.c));
        }
    }
    scan_to += f.joint_period();
    for (std::uint64_t n = 0; n <= scan_to; ++n) {
        Rational scale = rat_pow2(n);
        for (const BlockAnchor& a : f.template_at(n).anchors())
            sup.feed(rat_abs(a.value.at(n)) / (a.c * scale));
    }
    if (sup.best == 0) return 1;
    return 1 / sup.best;
}

namespace detail {

struct DriverUnion {
    std::vector<EventuallyPeriodicSet> drivers;
    std::vector<std::size_t> left_bits;   // position of each left driver in the union
    std::vector<std::size_t> right_bits;  // same for the right operand
};

inline DriverUnion unite_drivers(const BlockFunction& f, const BlockFunction& g) {
    DriverUnion u;
    u.drivers = f.drivers();
    u.left_bits.resize(f.drivers().size());
    for (std::size_t i = 0; i < f.drivers().size(); ++i) u.left_bits[i] = i;
    for (const auto& s : g.drivers()) {
        std::size_t j = 0;
        while (j < u.drivers.size() && !(u.drivers[j] == s)) ++j;
        if (j == u.drivers.size()) u.drivers.push_back(s);
        u.right_bits.push_back(j);
    }
    if (u.drivers.size() > max_drivers)
        throw_precondition("TooManyDrivers", "combined function would need " +
                                                 std::to_string(u.drivers.size()) + " driver sets");
    return u;
}

inline std::size_t project_bits(std::size_t w, const std::vector<std::size_t>& positions) {
    std::size_t v = 0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (w & (std::size_t{1} << positions[i])) v |= std::size_t{1} << i;
    return v;
}

inline std::vector<Rational> merged_grid(const BlockTemplate& s, const BlockTemplate& t) {
    std::vector<Rational> grid;
    grid.reserve(s.anchors().size() + t.anchors().size());
    for (const auto& a : s.anchors()) grid.push_back(a.c);
    for (const auto& a : t.anchors()) grid.push_back(a.c);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline BlockTemplate template_from_polyline(const Polyline& p, std::uint64_t n) {
    Rational scale = rat_pow2(n);
    std::vector<BlockAnchor> anchors;
    anchors.reserve(p.points().size());
    for (const auto& bp : p.points()) anchors.push_back({bp.x / scale, {0, 0, bp.y}});
    return BlockTemplate(std::move(anchors));
}

}  // namespace detail

// Exact pointwise join/meet within the representation class. Anchor
// dominance between distinct value triples is eventually constant in n;
// blocks before every dominance lock become per-block overrides. A strict
// crossing inside a segment survives for all later n, and its c-coordinate
// is n-independent exactly when the endpoint difference triples are
// proportional — then a fixed crossing anchor is inserted. Otherwise the
// result has a block-dependent breakpoint on infinitely many blocks, which
// no template can carry, and the operation reports StabilizationFailure.
inline BlockFunction lattice_combine(LatticeKind kind, const BlockFunction& f,
                                     const BlockFunction& g) {
    detail::DriverUnion u = detail::unite_drivers(f, g);
    const std::size_t rows = std::size_t{1} << u.drivers.size();

    std::uint64_t n0 = std::max(f.joint_preperiod(), g.joint_preperiod());
    std::uint64_t period = lcm_u64(f.joint_period(), g.joint_period());

    std::vector<bool> realized(rows, false);
    for (std::uint64_t n = n0; n < n0 + period; ++n)
        realized[detail::membership_index(u.drivers, n)] = true;

    BlockFunctionData out;
    out.drivers = u.drivers;
    out.selector.assign(rows, 0);

    const bool take_max = kind == LatticeKind::join;
    std::uint64_t stable_from = n0;
    for (std::size_t w = 0; w < rows; ++w) {
        if (!realized[w]) continue;
        const BlockTemplate& tf =
            f.templates()[f.data().selector[detail::project_bits(w, u.left_bits)]];
        const BlockTemplate& tg =
            g.templates()[g.data().selector[detail::project_bits(w, u.right_bits)]];
        std::vector<Rational> grid = detail::merged_grid(tf, tg);
        BlockTemplate F = tf.refined_to(grid), G = tg.refined_to(grid);

        std::vector<detail::EventualSign> sig(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            sig[j] = detail::eventual_sign(F.anchors()[j].value - G.anchors()[j].value);
            stable_from = std::max<std::uint64_t>(stable_from, sig[j].from);
        }

        std::vector<BlockAnchor> anchors;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (j > 0 && sig[j - 1].sign * sig[j].sign < 0) {
                AnchorValue dl = F.anchors()[j - 1].value - G.anchors()[j - 1].value;
                AnchorValue dr = F.anchors()[j].value - G.anchors()[j].value;
                bool proportional = dl.a * dr.b == dr.a * dl.b && dl.a * dr.d == dr.a * dl.d &&
                                    dl.b * dr.d == dr.b * dl.d;
                if (!proportional)
                    throw_domain("StabilizationFailure",
                                 "pointwise " + std::string(take_max ? "max" : "min") +
                                     " has a block-dependent crossing between c = " +
                                     to_string(grid[j - 1]) + " and c = " + to_string(grid[j]));
                Rational kappa = dl.a != 0   ? dr.a / dl.a
                                 : dl.b != 0 ? dr.b / dl.b
                                             : dr.d / dl.d;
                Rational s = 1 / (1 - kappa);  // kappa < 0, so s in (0, 1)
                Rational c = grid[j - 1] + s * (grid[j] - grid[j - 1]);
                anchors.push_back({c, lerp(F.anchors()[j - 1].value, F.anchors()[j].value, s)});
            }
            bool pick_f = take_max ? sig[j].sign >= 0 : sig[j].sign <= 0;
            anchors.push_back({grid[j], pick_f ? F.anchors()[j].value : G.anchors()[j].value});
        }
        out.selector[w] = out.templates.size();
        out.templates.push_back(BlockTemplate(std::move(anchors)));
    }

    for (std::uint64_t n = 0; n < stable_from; ++n) {
        Polyline p = combine(kind, f.block_polyline(n), g.block_polyline(n));
        out.overrides[n] = out.templates.size();
        out.templates.push_back(detail::template_from_polyline(p, n));
    }
    return BlockFunction(std::move(out));
}

inline BlockFunction join(const BlockFunction& f, const BlockFunction& g) {
    return lattice_combine(LatticeKind::join, f, g);
}
inline BlockFunction meet(const BlockFunction& f, const BlockFunction& g) {
    return lattice_combine(LatticeKind::meet, f, g);
}

// Exact a*f + b*g; always representable since refinement and the triple
// arithmetic are both linear.
inline BlockFunction affine_combine(const Rational& a, const BlockFunction& f, const Rational& b,
                                    const BlockFunction& g) {
    detail::DriverUnion u = detail::unite_drivers(f, g);
    const std::size_t rows = std::size_t{1} << u.drivers.size();

    std::uint64_t n0 = std::max(f.joint_preperiod(), g.joint_preperiod());
    std::uint64_t period = lcm_u64(f.joint_period(), g.joint_period());

    BlockFunctionData out;
    out.drivers = u.drivers;
    out.selector.assign(rows, 0);

    auto combine_pair = [&](const BlockTemplate& tf, const BlockTemplate& tg) {
        std::vector<Rational> grid = detail::merged_grid(tf, tg);
        std::vector<BlockAnchor> anchors;
        anchors.reserve(grid.size());
        for (const Rational& c : grid)
            anchors.push_back({c, a * tf.value_at(c) + b * tg.value_at(c)});
        return BlockTemplate(std::move(anchors));
    };

    std::vector<bool> realized(rows, false);
    for (std::uint64_t n = n0; n < n0 + period; ++n)
        realized[detail::membership_index(u.drivers, n)] = true;
    for (std::size_t w = 0; w < rows; ++w) {
        if (!realized[w]) continue;
        const BlockTemplate& tf =
            f.templates()[f.data().selector[detail::project_bits(w, u.left_bits)]];
        const BlockTemplate& tg =
            g.templates()[g.data().selector[detail::project_bits(w, u.right_bits)]];
        out.selector[w] = out.templates.size();
        out.templates.push_back(combine_pair(tf, tg));
    }
    for (std::uint64_t n = 0; n < n0; ++n) {
        out.overrides[n] = out.templates.size();
        out.templates.push_back(combine_pair(f.template_at(n), g.template_at(n)));
    }
    return BlockFunction(std::move(out));
}

inline BlockFunction scale(const Rational& s, const BlockFunction& f) {
    return affine_combine(s, f, 0, f);
}

inline BlockFunction negate(const BlockFunction& f) { return scale(-1, f); }

// |f| = f v (-f); subject to the same representability caveat as join.
inline BlockFunction abs(const BlockFunction& f) { return join(f, negate(f)); }

}  // namespace latline
