#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "latline/block_function.hpp"
#include "latline/block_ops.hpp"
#include "latline/eps_set.hpp"
#include "latline/errors.hpp"
#include "latline/hom.hpp"
#include "latline/polyline.hpp"

namespace latline {

// The function with f(2^n) = 2^n for n in A and f(2^n) = 0 otherwise,
// linear on each block. Its filter limits distinguish A from its
// complement: the limit at (1, A) is 1 and at (1, A^c) is 0, with
// Lipschitz constant exactly 2 for every infinite co-infinite A (the
// steepest segment climbs 0 -> 2^{n+1}).
inline BlockFunction set_witness_function(const EventuallyPeriodicSet& A) {
    if (A.is_finite() || !A.is_coinfinite())
        throw_precondition("DegenerateSet", "witness set must be infinite and co-infinite");
    BlockFunctionData d;
    d.drivers = {A, A.shift_back(1)};  // bit0: n in A, bit1: n+1 in A
    d.selector.resize(4);
    for (std::size_t v = 0; v < 4; ++v) {
        AnchorValue start{(v & 1) ? 1 : 0, 0, 0};
        AnchorValue end{(v & 2) ? 2 : 0, 0, 0};
        d.selector[v] = d.templates.size();
        d.templates.push_back(BlockTemplate::two_point(start, end));
    }
    return BlockFunction(std::move(d));
}

struct GapCertificate {
    Rational coefficient;  // 2c - d
    struct Entry {
        std::uint64_t n;
        Rational gap;    // p_{n+1} - p_n
        Rational bound;  // (2c - d) * 2^n
    };
    std::vector<Entry> entries;  // preperiod plus one full driver cycle
    bool holds = false;          // every gap >= its bound
};

struct AlternatingWitness {
    BlockFunction function;
    GapCertificate certificate;
};

// The polygonal through (p_n, q_n) with p_n = c 2^n on A, d 2^n off A and
// q_n = p_n on A, 0 off A. Consecutive nodes stay at least (2c - d) 2^n
// apart, which keeps the polygonal a function with finite slopes. Its
// filter limit at (c, A) is 1 and at (d, A^c) is 0.
inline AlternatingWitness alternating_witness_function(const Rational& c, const Rational& d,
                                                       const EventuallyPeriodicSet& A) {
    if (!(1 <= c && c <= d && d < 2))
        throw_precondition("BadRange", "need 1 <= c <= d < 2");
    if (A.is_finite() || !A.is_coinfinite())
        throw_precondition("DegenerateSet", "witness set must be infinite and co-infinite");

    auto pos = [&](bool in) { return in ? c : d; };    // p_n / 2^n
    auto val = [&](bool in) { return in ? c : Rational(0); };  // q_n / 2^n
    // Slope of the segment (p_n, q_n) -> (p_{n+1}, q_{n+1}) and the value
    // the segment takes at the block boundary 2^{n+1}, both divided by 2^n;
    // they depend only on the memberships of n and n+1.
    auto slope = [&](bool x, bool y) { return (2 * val(y) - val(x)) / (2 * pos(y) - pos(x)); };
    auto boundary = [&](bool x, bool y) { return val(x) + (2 - pos(x)) * slope(x, y); };

    auto block_template = [&](bool prev, bool cur, bool next) {
        std::vector<BlockAnchor> anchors;
        anchors.push_back({Rational(1), {boundary(prev, cur) / 2, 0, 0}});
        if (pos(cur) > 1) anchors.push_back({pos(cur), {val(cur), 0, 0}});
        anchors.push_back({Rational(2), {boundary(cur, next), 0, 0}});
        return BlockTemplate(std::move(anchors));
    };

    BlockFunctionData data;
    data.drivers = {A.shift_forward(1), A, A.shift_back(1)};  // bits: n-1, n, n+1 in A
    data.selector.resize(8);
    for (std::size_t v = 0; v < 8; ++v) {
        data.selector[v] = data.templates.size();
        data.templates.push_back(block_template(v & 1, v & 2, v & 4));
    }
    {
        // Block 0 has no predecessor; extend flat from t = 1 to p_0.
        bool cur = A.contains(0), next = A.contains(1);
        std::vector<BlockAnchor> anchors;
        anchors.push_back({Rational(1), {val(cur), 0, 0}});
        if (pos(cur) > 1) anchors.push_back({pos(cur), {val(cur), 0, 0}});
        anchors.push_back({Rational(2), {boundary(cur, next), 0, 0}});
        data.overrides[0] = data.templates.size();
        data.templates.push_back(BlockTemplate(std::move(anchors)));
    }

    AlternatingWitness out{BlockFunction(std::move(data)), {}};
    out.certificate.coefficient = 2 * c - d;
    out.certificate.holds = true;
    std::uint64_t cycle = A.preperiod().size() + 1 + A.period().size();
    for (std::uint64_t n = 0; n < cycle; ++n) {
        Rational gap = (2 * pos(A.contains(n + 1)) - pos(A.contains(n))) * rat_pow2(n);
        Rational bound = out.certificate.coefficient * rat_pow2(n);
        if (gap < bound) out.certificate.holds = false;
        out.certificate.entries.push_back({n, std::move(gap), std::move(bound)});
    }
    return out;
}

// Single-template function with f(one_at * 2^n) = one_at * 2^n and
// f(zero_at * 2^n) = 0 for every n, so the filter limit at position one_at
// is 1 and at zero_at is 0 along every infinite set. Block boundaries
// carry 0 except when one_at = 1, where they carry the pinned value on
// both sides of the seam.
inline BlockFunction scale_witness_function(const Rational& one_at, const Rational& zero_at) {
    if (one_at == zero_at)
        throw_precondition("EqualParameters", "the two scale positions must differ");
    if (one_at < 1 || one_at > 2 || zero_at < 1 || zero_at > 2)
        throw_precondition("BadRange", "scale positions must lie in [1, 2]");
    if (one_at == 2)
        throw_precondition("BadRange", "normalize the pinned scale 2 to (1, shifted set) first");
    if (one_at == 1 && zero_at == 2)
        throw_precondition("BadRange",
                           "positions 1 and 2 name the same points across blocks; no such function");

    std::vector<BlockAnchor> anchors;
    if (one_at == 1) {
        anchors.push_back({Rational(1), {1, 0, 0}});
        anchors.push_back({zero_at, {0, 0, 0}});
        anchors.push_back({Rational(2), {2, 0, 0}});
    } else {
        anchors.push_back({Rational(1), {0, 0, 0}});
        std::vector<std::pair<Rational, Rational>> interior{{one_at, one_at}, {zero_at, Rational(0)}};
        if (interior[1].first < interior[0].first) std::swap(interior[0], interior[1]);
        for (auto& [p, a] : interior)
            if (p > 1 && p < 2) anchors.push_back({p, {a, 0, 0}});
        anchors.push_back({Rational(2), {0, 0, 0}});
    }
    return BlockFunction::single_template(BlockTemplate(std::move(anchors)));
}

namespace detail {

// Witness with value gate(n) * anchor_at * 2^n at the interior (or seam)
// position anchor_at, 0 at zero_at if given, 0 at free block boundaries.
inline BlockFunction gated_scale_witness(const Rational& anchor_at,
                                         const std::vector<EventuallyPeriodicSet>& gate_drivers,
                                         const std::function<bool(std::size_t)>& gate,
                                         const Rational* zero_at) {
    BlockFunctionData d;
    if (anchor_at == 1) {
        // The pinned value sits on the seam, so the template needs the gate
        // of n for its start and the gate of n + 1 for its end.
        for (const auto& s : gate_drivers) d.drivers.push_back(s);
        for (const auto& s : gate_drivers) d.drivers.push_back(s.shift_back(1));
        std::size_t g = gate_drivers.size();
        d.selector.resize(std::size_t{1} << d.drivers.size());
        std::size_t low_mask = (std::size_t{1} << g) - 1;
        for (std::size_t v = 0; v < d.selector.size(); ++v) {
            AnchorValue start{gate(v & low_mask) ? 1 : 0, 0, 0};
            AnchorValue end{gate(v >> g) ? 2 : 0, 0, 0};
            std::vector<BlockAnchor> anchors;
            anchors.push_back({Rational(1), start});
            if (zero_at && *zero_at > 1 && *zero_at < 2)
                anchors.push_back({*zero_at, {0, 0, 0}});
            anchors.push_back({Rational(2), end});
            d.selector[v] = d.templates.size();
            d.templates.push_back(BlockTemplate(std::move(anchors)));
        }
    } else {
        d.drivers = gate_drivers;
        d.selector.resize(std::size_t{1} << d.drivers.size());
        for (std::size_t v = 0; v < d.selector.size(); ++v) {
            std::vector<BlockAnchor> positions;
            positions.push_back({Rational(1), {0, 0, 0}});
            std::vector<std::pair<Rational, AnchorValue>> interior;
            interior.push_back({anchor_at, AnchorValue{gate(v) ? anchor_at : Rational(0), 0, 0}});
            if (zero_at && *zero_at > 1 && *zero_at < 2) interior.push_back({*zero_at, {0, 0, 0}});
            std::sort(interior.begin(), interior.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [p, a] : interior) positions.push_back({p, a});
            positions.push_back({Rational(2), {0, 0, 0}});
            d.selector[v] = d.templates.size();
            d.templates.push_back(BlockTemplate(std::move(positions)));
        }
    }
    return BlockFunction(std::move(d));
}

}  // namespace detail

// Witness separating two sets at the same scale c: value c 2^n on A (off
// B), 0 on B, needing A and B to overlap only finitely.
inline BlockFunction set_witness_function_at(const Rational& c, const EventuallyPeriodicSet& A,
                                             const EventuallyPeriodicSet& B) {
    if (A.is_finite() || B.is_finite())
        throw_precondition("DegenerateSet", "both sets must be infinite");
    if (set_intersection(A, B).is_infinite())
        throw_precondition("OverlapNotFinite", "the two sets must have finite intersection");
    if (c < 1 || c >= 2)
        throw_precondition("BadRange", "the shared scale must lie in [1, 2); normalize 2 first");
    return detail::gated_scale_witness(
        c, {A, B}, [](std::size_t bits) { return (bits & 1) && !(bits & 2); }, nullptr);
}

// Witness separating two different scales when the sets may overlap
// arbitrarily: value c 2^n at position one_at for n in A, 0 pinned at
// zero_at for every n.
inline BlockFunction gated_scale_witness_function(const Rational& one_at,
                                                  const EventuallyPeriodicSet& A,
                                                  const Rational& zero_at) {
    if (A.is_finite()) throw_precondition("DegenerateSet", "the gating set must be infinite");
    if (one_at == zero_at) throw_precondition("EqualParameters", "the two positions must differ");
    if (one_at < 1 || one_at >= 2 || zero_at < 1 || zero_at >= 2)
        throw_precondition("BadRange", "positions must lie in [1, 2); normalize 2 first");
    return detail::gated_scale_witness(
        one_at, {A}, [](std::size_t bits) { return (bits & 1) != 0; }, &zero_at);
}

// An element of the Lipschitz sequence lattice: a block function sampled
// at the integers, with finitely many values overridden (so the override
// part is bounded).
struct IntegerSequenceSpec {
    BlockFunction base;
    std::map<std::uint64_t, Rational> overrides;  // m >= 1

    Rational at(std::uint64_t m) const {
        if (m < 1) throw_precondition("BadRange", "integer sequences start at m = 1");
        auto it = overrides.find(m);
        if (it != overrides.end()) return it->second;
        return base.eval(Rational(m));
    }
};

// Piecewise-linear interpolation of the sequence on [1, horizon]:
// breakpoints exactly at the integers.
inline Polyline interpolate_integer_sequence(const IntegerSequenceSpec& g, std::uint64_t horizon) {
    if (horizon < 2) throw_precondition("BadRange", "interpolation horizon must be at least 2");
    std::vector<Breakpoint> pts;
    pts.reserve(horizon);
    for (std::uint64_t m = 1; m <= horizon; ++m) pts.push_back({Rational(m), g.at(m)});
    return Polyline(std::move(pts));
}

// Exact sup over [1, horizon] of |f - (f interpolated on the integers)|.
// Both functions are Lipschitz with f's constant and agree at integers, so
// the result never exceeds that constant; the caller may assert this.
inline Rational interpolation_gap(const BlockFunction& f, std::uint64_t horizon) {
    if (horizon < 2) throw_precondition("BadRange", "interpolation horizon must be at least 2");
    Polyline restricted = f.restrict(1, Rational(horizon));
    Polyline interpolated = interpolate_integer_sequence({f, {}}, horizon);
    return max_deviation(restricted, interpolated);
}

// Filter-limit evaluation on an integer sequence. c is required dyadic so
// that the sampled points c 2^n are eventually integers; the finitely many
// overrides are a bounded perturbation and never move the limit, so the
// value is exactly the limit of the base function.
inline LimitValue integer_hom_limit(const IntegerSequenceSpec& g, const Rational& c,
                                    const EventuallyPeriodicSet& A) {
    if (!is_dyadic(c) || c < 1 || c > 2)
        throw_precondition("BadRange", "need a dyadic scale c in [1, 2]");
    return filter_limit(hom_filter(1, c, A), g.base);
}

inline Rational integer_hom_eval(const IntegerSequenceSpec& g, const Rational& c,
                                 const EventuallyPeriodicSet& A) {
    return integer_hom_limit(g, c, A).value();
}

}  // namespace latline
