#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latline/eps_set.hpp"
#include "latline/errors.hpp"
#include "latline/polyline.hpp"
#include "latline/rational.hpp"

namespace latline {

// Value of an anchor on block n: a*2^n + b*n + d. The a term carries
// linear growth, the b term log-like growth (unbounded with zero growth
// rate), d the bounded part.
struct AnchorValue {
    Rational a;
    Rational b;
    Rational d;

    Rational at(std::uint64_t n) const { return a * rat_pow2(n) + b * Rational(n) + d; }

    bool operator==(const AnchorValue&) const = default;

    friend AnchorValue operator+(const AnchorValue& u, const AnchorValue& v) {
        return {u.a + v.a, u.b + v.b, u.d + v.d};
    }
    friend AnchorValue operator-(const AnchorValue& u, const AnchorValue& v) {
        return {u.a - v.a, u.b - v.b, u.d - v.d};
    }
    friend AnchorValue operator*(const Rational& s, const AnchorValue& v) {
        return {s * v.a, s * v.b, s * v.d};
    }
    bool is_zero() const { return a == 0 && b == 0 && d == 0; }
};

inline AnchorValue lerp(const AnchorValue& u, const AnchorValue& v, const Rational& s) {
    return {u.a + s * (v.a - u.a), u.b + s * (v.b - u.b), u.d + s * (v.d - u.d)};
}

struct BlockAnchor {
    Rational c;  // position within the block, in [1, 2]
    AnchorValue value;
    bool operator==(const BlockAnchor&) const = default;
};

// One block's shape: the function on block n is the polyline through
// (c_j * 2^n, value_j.at(n)). Anchors have strictly increasing c with
// first c = 1 and last c = 2.
class BlockTemplate {
public:
    BlockTemplate() = default;
    explicit BlockTemplate(std::vector<BlockAnchor> anchors) : anchors_(std::move(anchors)) {}

    static BlockTemplate two_point(AnchorValue at_start, AnchorValue at_end) {
        return BlockTemplate({{Rational(1), std::move(at_start)}, {Rational(2), std::move(at_end)}});
    }

    const std::vector<BlockAnchor>& anchors() const { return anchors_; }
    std::vector<BlockAnchor>& anchors() { return anchors_; }

    std::optional<std::string> well_formed() const {
        if (anchors_.size() < 2) return "template needs at least two anchors";
        if (anchors_.front().c != 1) return "first anchor must sit at c = 1";
        if (anchors_.back().c != 2) return "last anchor must sit at c = 2";
        for (std::size_t i = 1; i < anchors_.size(); ++i)
            if (!(anchors_[i - 1].c < anchors_[i].c)) return "anchor positions must strictly increase";
        return std::nullopt;
    }

    // Interpolated value triple at position c in [1, 2]; linear in each
    // coefficient, so interpolating triples commutes with evaluating at n.
    AnchorValue value_at(const Rational& c) const {
        std::size_t hi = 1;
        while (hi + 1 < anchors_.size() && anchors_[hi].c < c) ++hi;
        const BlockAnchor& l = anchors_[hi - 1];
        const BlockAnchor& r = anchors_[hi];
        if (c == l.c) return l.value;
        if (c == r.c) return r.value;
        return lerp(l.value, r.value, (c - l.c) / (r.c - l.c));
    }

    // Same shape re-anchored on a superset grid of positions.
    BlockTemplate refined_to(const std::vector<Rational>& grid) const {
        std::vector<BlockAnchor> out;
        out.reserve(grid.size());
        for (const Rational& c : grid) out.push_back({c, value_at(c)});
        return BlockTemplate(std::move(out));
    }

    // Drop interior anchors that interpolate their neighbours exactly.
    void normalize() {
        std::vector<BlockAnchor> out;
        out.reserve(anchors_.size());
        for (const BlockAnchor& p : anchors_) {
            while (out.size() >= 2) {
                const BlockAnchor& a = out[out.size() - 2];
                const BlockAnchor& b = out.back();
                Rational s = (b.c - a.c) / (p.c - a.c);
                if (lerp(a.value, p.value, s) == b.value)
                    out.pop_back();
                else
                    break;
            }
            out.push_back(p);
        }
        anchors_ = std::move(out);
    }

    Polyline block_polyline(std::uint64_t n) const {
        std::vector<Breakpoint> pts;
        pts.reserve(anchors_.size());
        Rational scale = rat_pow2(n);
        for (const BlockAnchor& a : anchors_) pts.push_back({a.c * scale, a.value.at(n)});
        return Polyline(std::move(pts));
    }

    bool operator==(const BlockTemplate&) const = default;

private:
    std::vector<BlockAnchor> anchors_;
};

// Raw, possibly invalid description of a block function. The selector maps
// the driver-membership bit vector of n (bit i = membership in drivers[i])
// to a template index; overrides pin individual blocks.
struct BlockFunctionData {
    std::vector<EventuallyPeriodicSet> drivers;
    std::vector<BlockTemplate> templates;
    std::vector<std::size_t> selector;  // size 2^drivers.size()
    std::map<std::uint64_t, std::size_t> overrides;

    bool operator==(const BlockFunctionData&) const = default;
};

struct Validation {
    enum class Status { ok, seam_violation, bad_template };
    Status status = Status::ok;
    std::uint64_t seam_block = 0;  // meaningful for seam_violation
    std::string reason;

    bool is_ok() const { return status == Status::ok; }
    static Validation ok() { return {}; }
    static Validation seam(std::uint64_t n) {
        return {Status::seam_violation, n, "blocks " + std::to_string(n) + " and " + std::to_string(n + 1) + " disagree at the shared endpoint"};
    }
    static Validation bad(std::string why) { return {Status::bad_template, 0, std::move(why)}; }
};

namespace detail {

// Hard bound on driver count: lattice combines take driver unions, which
// can exceed the interface-level cap of 4 enforced at parse time.
inline constexpr std::size_t max_drivers = 16;

inline std::size_t membership_index(const std::vector<EventuallyPeriodicSet>& drivers,
                                    std::uint64_t n) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < drivers.size(); ++i)
        if (drivers[i].contains(n)) idx |= std::size_t{1} << i;
    return idx;
}

inline std::uint64_t joint_preperiod(const BlockFunctionData& d) {
    std::uint64_t n0 = 0;
    for (const auto& s : d.drivers) n0 = std::max<std::uint64_t>(n0, s.preperiod().size());
    if (!d.overrides.empty()) n0 = std::max<std::uint64_t>(n0, d.overrides.rbegin()->first + 1);
    return n0;
}

inline std::uint64_t joint_period(const BlockFunctionData& d) {
    std::uint64_t p = 1;
    for (const auto& s : d.drivers) p = lcm_u64(p, s.period().size());
    return p;
}

inline std::size_t template_index_at(const BlockFunctionData& d, std::uint64_t n) {
    auto it = d.overrides.find(n);
    if (it != d.overrides.end()) return it->second;
    return d.selector[membership_index(d.drivers, n)];
}

}  // namespace detail

// Seam consistency is a numeric statement per block pair. In the
// preperiod it is checked numerically; on the periodic part the same
// template pair recurs at infinitely many n, and a nonzero
// alpha*2^n + beta*n + gamma has at most two roots, so there the check is
// coefficientwise: a_end = 2 a_start, b_end = b_start, d_end = b_start + d_start.
inline Validation validate(const BlockFunctionData& d) {
    if (d.drivers.size() > detail::max_drivers) return Validation::bad("too many driver sets");
    if (d.selector.size() != (std::size_t{1} << d.drivers.size()))
        return Validation::bad("selector must have one row per membership vector");
    if (d.templates.empty()) return Validation::bad("no templates");
    for (const auto& t : d.templates)
        if (auto why = t.well_formed()) return Validation::bad(*why);
    for (std::size_t id : d.selector)
        if (id >= d.templates.size()) return Validation::bad("selector references a missing template");
    for (const auto& [n, id] : d.overrides)
        if (id >= d.templates.size()) return Validation::bad("override references a missing template");

    const std::uint64_t n0 = detail::joint_preperiod(d);
    const std::uint64_t period = detail::joint_period(d);
    for (std::uint64_t n = 0; n < n0; ++n) {
        const BlockTemplate& cur = d.templates[detail::template_index_at(d, n)];
        const BlockTemplate& nxt = d.templates[detail::template_index_at(d, n + 1)];
        if (cur.anchors().back().value.at(n) != nxt.anchors().front().value.at(n + 1))
            return Validation::seam(n);
    }
    for (std::uint64_t n = n0; n < n0 + period; ++n) {
        const AnchorValue& e = d.templates[detail::template_index_at(d, n)].anchors().back().value;
        const AnchorValue& s = d.templates[detail::template_index_at(d, n + 1)].anchors().front().value;
        if (e.a != 2 * s.a || e.b != s.b || e.d != s.b + s.d) return Validation::seam(n);
    }
    return Validation::ok();
}

// A Lipschitz function on [1, infinity) presented per dyadic block
// [2^n, 2^{n+1}]. Validated eagerly: an instance always satisfies seam
// consistency, so it is continuous, and it is globally Lipschitz because
// there are finitely many templates. Instances are immutable and
// canonicalized, so operator== is a sound function-equality test.
class BlockFunction {
public:
    explicit BlockFunction(BlockFunctionData data) : d_(std::move(data)) {
        Validation v = validate(d_);
        if (!v.is_ok()) {
            if (v.status == Validation::Status::seam_violation)
                throw_precondition("SeamViolation", v.reason);
            throw_precondition("BadTemplate", v.reason);
        }
        normalize();
        pre_ = detail::joint_preperiod(d_);
        per_ = detail::joint_period(d_);
    }

    static BlockFunction single_template(BlockTemplate t) {
        return BlockFunction({{}, {std::move(t)}, {0}, {}});
    }

    // The identity t |-> t.
    static BlockFunction identity() {
        return single_template(BlockTemplate::two_point({1, 0, 0}, {2, 0, 0}));
    }

    static BlockFunction constant(const Rational& v) {
        return single_template(BlockTemplate::two_point({0, 0, v}, {0, 0, v}));
    }

    // f(2^n) = n, linear in between: unbounded but of zero growth rate.
    static BlockFunction dyadic_log() {
        return single_template(BlockTemplate::two_point({0, 1, 0}, {0, 1, 1}));
    }

    const BlockFunctionData& data() const { return d_; }
    const std::vector<EventuallyPeriodicSet>& drivers() const { return d_.drivers; }
    const std::vector<BlockTemplate>& templates() const { return d_.templates; }
    const std::map<std::uint64_t, std::size_t>& overrides() const { return d_.overrides; }

    std::uint64_t joint_preperiod() const { return pre_; }
    std::uint64_t joint_period() const { return per_; }

    std::size_t template_index_at(std::uint64_t n) const { return detail::template_index_at(d_, n); }
    const BlockTemplate& template_at(std::uint64_t n) const {
        return d_.templates[template_index_at(n)];
    }

    Rational eval(const Rational& t) const {
        if (t < 1) throw_domain("OutOfDomain", "block functions live on [1, infinity)");
        std::uint64_t n = floor_log2(t);
        Rational c = t / rat_pow2(n);
        return template_at(n).value_at(c).at(n);
    }

    Polyline block_polyline(std::uint64_t n) const { return template_at(n).block_polyline(n); }

    // Exact polyline restriction to [from, to].
    Polyline restrict(const Rational& from, const Rational& to) const {
        if (from < 1) throw_domain("OutOfDomain", "block functions live on [1, infinity)");
        if (!(from < to)) throw_precondition("BadRange", "restriction needs from < to");
        std::vector<Breakpoint> pts;
        pts.push_back({from, eval(from)});
        std::uint64_t n_hi = floor_log2(to);
        for (std::uint64_t n = floor_log2(from); n <= n_hi; ++n) {
            Rational scale = rat_pow2(n);
            for (const BlockAnchor& a : template_at(n).anchors()) {
                Rational x = a.c * scale;
                if (x <= pts.back().x || x >= to) continue;
                pts.push_back({x, a.value.at(n)});
            }
        }
        pts.push_back({to, eval(to)});
        return Polyline(std::move(pts));
    }

    bool operator==(const BlockFunction& other) const { return d_ == other.d_; }

private:
    void normalize();
    std::vector<bool> realized_rows() const;
    void merge_duplicate_driver(std::size_t bit, std::size_t alias);
    bool try_drop_driver(std::size_t bit);

    BlockFunctionData d_;
    std::uint64_t pre_ = 0;
    std::uint64_t per_ = 1;
};

// Selector rows actually consulted by some block: membership vectors of
// all n in [0, N0 + P) without an override. Everything past N0 repeats
// with period P, so this window realizes every row that any block uses.
inline std::vector<bool> BlockFunction::realized_rows() const {
    std::vector<bool> realized(d_.selector.size(), false);
    std::uint64_t n0 = detail::joint_preperiod(d_);
    std::uint64_t bound = n0 + detail::joint_period(d_);
    for (std::uint64_t n = 0; n < bound; ++n) {
        if (d_.overrides.count(n)) continue;
        realized[detail::membership_index(d_.drivers, n)] = true;
    }
    return realized;
}

// Remove driver `bit` which duplicates driver `alias` (alias < bit): rows
// where the two bits disagree are unreachable, so the selector is rebuilt
// with the removed bit slaved to the alias bit.
inline void BlockFunction::merge_duplicate_driver(std::size_t bit, std::size_t alias) {
    const std::size_t k = d_.drivers.size();
    std::vector<std::size_t> selector(std::size_t{1} << (k - 1));
    for (std::size_t v = 0; v < selector.size(); ++v) {
        std::size_t old = 0, src = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == bit) continue;
            if (v & (std::size_t{1} << src)) old |= std::size_t{1} << i;
            ++src;
        }
        if (old & (std::size_t{1} << alias)) old |= std::size_t{1} << bit;
        selector[v] = d_.selector[old];
    }
    d_.drivers.erase(d_.drivers.begin() + static_cast<std::ptrdiff_t>(bit));
    d_.selector = std::move(selector);
}

// Drop driver `bit` if no pair of realized rows differing exactly in that
// bit selects different templates. Rows keep the template of a realized
// completion; rows with none are unreachable and filled later.
inline bool BlockFunction::try_drop_driver(std::size_t bit) {
    std::vector<bool> realized = realized_rows();
    const std::size_t mask = std::size_t{1} << bit;
    for (std::size_t v = 0; v < d_.selector.size(); ++v)
        if (realized[v] && realized[v ^ mask] && d_.selector[v] != d_.selector[v ^ mask])
            return false;
    const std::size_t k = d_.drivers.size();
    std::vector<std::size_t> selector(std::size_t{1} << (k - 1), std::size_t(-1));
    for (std::size_t v = 0; v < selector.size(); ++v) {
        std::size_t old = 0, src = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == bit) continue;
            if (v & (std::size_t{1} << src)) old |= std::size_t{1} << i;
            ++src;
        }
        if (realized[old])
            selector[v] = d_.selector[old];
        else if (realized[old | mask])
            selector[v] = d_.selector[old | mask];
    }
    // Unreachable rows: any valid id will do; pick the first reachable one.
    std::size_t fallback = 0;
    for (std::size_t v = 0; v < selector.size(); ++v)
        if (selector[v] != std::size_t(-1)) {
            fallback = selector[v];
            break;
        }
    for (auto& id : selector)
        if (id == std::size_t(-1)) id = fallback;
    d_.drivers.erase(d_.drivers.begin() + static_cast<std::ptrdiff_t>(bit));
    d_.selector = std::move(selector);
    return true;
}

inline void BlockFunction::normalize() {
    for (auto& t : d_.templates) t.normalize();

    // Merge structurally equal templates.
    {
        std::vector<std::size_t> remap(d_.templates.size());
        std::vector<BlockTemplate> uniq;
        for (std::size_t i = 0; i < d_.templates.size(); ++i) {
            std::size_t j = 0;
            while (j < uniq.size() && !(uniq[j] == d_.templates[i])) ++j;
            if (j == uniq.size()) uniq.push_back(d_.templates[i]);
            remap[i] = j;
        }
        d_.templates = std::move(uniq);
        for (auto& id : d_.selector) id = remap[id];
        for (auto& [n, id] : d_.overrides) id = remap[id];
    }

    // Drop overrides that repeat what the selector already says on their
    // block; this must precede the reachability analysis below.
    for (auto it = d_.overrides.begin(); it != d_.overrides.end();) {
        std::size_t sel = d_.selector[detail::membership_index(d_.drivers, it->first)];
        if (sel == it->second ||
            d_.templates[sel].block_polyline(it->first) ==
                d_.templates[it->second].block_polyline(it->first))
            it = d_.overrides.erase(it);
        else
            ++it;
    }

    // Merge duplicate drivers, then drop drivers the realized selector
    // rows never distinguish (e.g. a driver determined by another one).
    for (std::size_t i = 0; i + 1 < d_.drivers.size();) {
        std::size_t j = i + 1;
        for (; j < d_.drivers.size(); ++j)
            if (d_.drivers[i] == d_.drivers[j]) break;
        if (j == d_.drivers.size())
            ++i;
        else
            merge_duplicate_driver(j, i);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < d_.drivers.size(); ++i)
            if (try_drop_driver(i)) {
                changed = true;
                break;
            }
    }

    // Canonical driver order.
    {
        std::vector<std::size_t> order(d_.drivers.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return d_.drivers[x].key() < d_.drivers[y].key();
        });
        std::vector<EventuallyPeriodicSet> drivers;
        drivers.reserve(order.size());
        for (std::size_t i : order) drivers.push_back(d_.drivers[i]);
        std::vector<std::size_t> selector(d_.selector.size());
        for (std::size_t v = 0; v < selector.size(); ++v) {
            std::size_t old = 0;
            for (std::size_t bit = 0; bit < order.size(); ++bit)
                if (v & (std::size_t{1} << bit)) old |= std::size_t{1} << order[bit];
            selector[v] = d_.selector[old];
        }
        d_.drivers = std::move(drivers);
        d_.selector = std::move(selector);
    }

    // Garbage-collect templates, numbering them by first realized use, and
    // point unreachable selector rows at template 0 so that equality does
    // not depend on unreachable state.
    {
        std::vector<bool> realized = realized_rows();
        std::vector<std::size_t> remap(d_.templates.size(), std::size_t(-1));
        std::vector<BlockTemplate> kept;
        auto visit = [&](std::size_t id) {
            if (remap[id] == std::size_t(-1)) {
                remap[id] = kept.size();
                kept.push_back(d_.templates[id]);
            }
        };
        for (std::size_t v = 0; v < d_.selector.size(); ++v)
            if (realized[v]) visit(d_.selector[v]);
        for (const auto& [n, id] : d_.overrides) visit(id);
        if (kept.empty()) visit(d_.selector[0]);
        d_.templates = std::move(kept);
        for (std::size_t v = 0; v < d_.selector.size(); ++v)
            d_.selector[v] = realized[v] ? remap[d_.selector[v]] : 0;
        for (auto& [n, id] : d_.overrides) id = remap[id];
    }
}

}  // namespace latline
