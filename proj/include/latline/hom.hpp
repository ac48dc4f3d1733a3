#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "latline/block_function.hpp"
#include "latline/block_ops.hpp"
#include "latline/errors.hpp"
#include "latline/rational.hpp"

namespace latline {

// Real-valued lattice homomorphism descriptors.
//
//   Zero                     the zero functional
//   PointEval(lambda, t)     f |-> lambda * f(t)
//   FilterLimit(lambda,c,A)  f |-> lambda * lim_{n in A} f(c*2^n)/(c*2^n)
//
// A FilterLimit stands for every free ultrafilter containing A; its value
// is defined only when the limit along A exists, and on divergence the
// finite cluster set lists exactly the values those ultrafilters can take.
struct ZeroHom {
    bool operator==(const ZeroHom&) const = default;
};

struct PointEval {
    Rational lambda;  // > 0
    Rational t;       // >= 1
    bool operator==(const PointEval&) const = default;
};

struct FilterLimit {
    Rational lambda;  // > 0
    Rational c;       // in [1, 2]
    EventuallyPeriodicSet set;  // infinite
    bool operator==(const FilterLimit&) const = default;
};

using HomSpec = std::variant<ZeroHom, PointEval, FilterLimit>;

inline PointEval hom_point(Rational lambda, Rational t) {
    if (!(lambda > 0)) throw_precondition("BadRange", "point evaluation needs lambda > 0");
    if (t < 1) throw_precondition("BadRange", "evaluation point must lie in [1, infinity)");
    return {std::move(lambda), std::move(t)};
}

inline FilterLimit hom_filter(Rational lambda, Rational c, EventuallyPeriodicSet set) {
    if (!(lambda > 0)) throw_precondition("BadRange", "filter limit needs lambda > 0");
    if (c < 1 || c > 2) throw_precondition("BadRange", "filter limit needs c in [1, 2]");
    if (set.is_finite()) throw_precondition("DegenerateSet", "filter limit needs an infinite set");
    return {std::move(lambda), std::move(c), std::move(set)};
}

class DivergentAlongFilter : public Error {
public:
    explicit DivergentAlongFilter(std::vector<Rational> clusters)
        : Error(ErrorKind::domain, "DivergentAlongFilter", render(clusters)),
          clusters_(std::move(clusters)) {}

    const std::vector<Rational>& clusters() const { return clusters_; }

private:
    static std::string render(const std::vector<Rational>& cs) {
        std::string s = "limit takes values {";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i) s += ", ";
            s += to_string(cs[i]);
        }
        return s + "} along the set";
    }
    std::vector<Rational> clusters_;
};

class HorizonExceeded : public Error {
public:
    HorizonExceeded(std::uint64_t best_m, Rational best_defect)
        : Error(ErrorKind::domain, "HorizonExceeded",
                "best candidate m = " + std::to_string(best_m) + " with defect " +
                    to_string(best_defect)),
          best_m_(best_m),
          best_defect_(std::move(best_defect)) {}

    std::uint64_t best_m() const { return best_m_; }
    const Rational& best_defect() const { return best_defect_; }

private:
    std::uint64_t best_m_;
    Rational best_defect_;
};

// Outcome of a limit along a set: the sorted cluster-value set, a
// singleton exactly when the limit exists.
class LimitValue {
public:
    static LimitValue converged(Rational v) { return LimitValue({std::move(v)}); }
    static LimitValue from_clusters(std::vector<Rational> vs) {
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return LimitValue(std::move(vs));
    }

    bool divergent() const { return clusters_.size() > 1; }
    const std::vector<Rational>& clusters() const { return clusters_; }
    const Rational& value() const {
        if (divergent()) throw DivergentAlongFilter(clusters_);
        return clusters_.front();
    }

    std::string describe() const {
        if (!divergent()) return to_string(clusters_.front());
        std::string s = "{";
        for (std::size_t i = 0; i < clusters_.size(); ++i) {
            if (i) s += ", ";
            s += to_string(clusters_[i]);
        }
        return s + "}";
    }

    bool operator==(const LimitValue&) const = default;

private:
    explicit LimitValue(std::vector<Rational> vs) : clusters_(std::move(vs)) {
        if (clusters_.empty())
            throw_precondition("EmptyLimit", "a limit needs at least one cluster value");
    }
    std::vector<Rational> clusters_;
};

namespace detail {

// Joint recurrence structure of a family of block functions and index
// sets: beyond n0 everything is periodic with the given period, so the
// residue classes mod `period` starting at n0 enumerate all asymptotic
// behaviours.
struct ClassContext {
    std::uint64_t n0 = 0;
    std::uint64_t period = 1;

    void absorb(const BlockFunction& f) {
        n0 = std::max(n0, f.joint_preperiod());
        period = lcm_u64(period, f.joint_period());
    }
    void absorb(const EventuallyPeriodicSet& s) {
        n0 = std::max<std::uint64_t>(n0, s.preperiod().size());
        period = lcm_u64(period, s.period().size());
    }
};

// lim along the class of n of f(c*2^k)/(c*2^k): bounded terms die, only
// the interpolated a-coefficient survives.
inline Rational class_ratio_limit(const BlockFunction& f, const Rational& c, std::uint64_t n) {
    return f.template_at(n).value_at(c).a / c;
}

}  // namespace detail

// lambda * lim_{n in A} f(c*2^n)/(c*2^n), as a cluster set over the
// residue classes that recur inside A.
inline LimitValue filter_limit(const FilterLimit& h, const BlockFunction& f) {
    if (h.c < 1 || h.c > 2) throw_precondition("BadRange", "filter limit needs c in [1, 2]");
    if (h.set.is_finite()) throw_precondition("DegenerateSet", "filter limit needs an infinite set");
    detail::ClassContext ctx;
    ctx.absorb(f);
    ctx.absorb(h.set);
    std::vector<Rational> values;
    for (std::uint64_t n = ctx.n0; n < ctx.n0 + ctx.period; ++n)
        if (h.set.contains(n)) values.push_back(h.lambda * detail::class_ratio_limit(f, h.c, n));
    return LimitValue::from_clusters(std::move(values));
}

inline LimitValue try_evaluate(const HomSpec& h, const BlockFunction& f) {
    if (std::holds_alternative<ZeroHom>(h)) return LimitValue::converged(0);
    if (const auto* p = std::get_if<PointEval>(&h))
        return LimitValue::converged(p->lambda * f.eval(p->t));
    return filter_limit(std::get<FilterLimit>(h), f);
}

inline Rational evaluate(const HomSpec& h, const BlockFunction& f) {
    return try_evaluate(h, f).value();
}

// Reconstruction of a homomorphism from its values at 1 and at the
// identity. Positive value at 1 pins a scaled point evaluation; both zero
// is the zero functional; zero at 1 with positive value at the identity is
// genuinely not point-like and needs a filter-limit description.
struct NotPointLike {
    bool operator==(const NotPointLike&) const = default;
};
using RecoveredHom = std::variant<HomSpec, NotPointLike>;

inline RecoveredHom recover_point(const Rational& value_at_one, const Rational& value_at_identity) {
    if (value_at_one < 0 || value_at_identity < value_at_one)
        throw_precondition("Inconsistent",
                           "a homomorphism has phi(identity) >= phi(1) >= 0; got phi(1) = " +
                               to_string(value_at_one) + ", phi(identity) = " +
                               to_string(value_at_identity));
    if (value_at_one > 0)
        return HomSpec(PointEval{value_at_one, value_at_identity / value_at_one});
    if (value_at_identity == 0) return HomSpec(ZeroHom{});
    return NotPointLike{};
}

// Scale so that the identity function maps to 1. For a point evaluation
// phi(identity) = lambda * t, for a filter limit it is lambda.
inline HomSpec renormalize(const HomSpec& h) {
    if (std::holds_alternative<ZeroHom>(h))
        throw_precondition("ZeroHom", "the zero functional cannot be renormalized");
    if (const auto* p = std::get_if<PointEval>(&h)) return PointEval{1 / p->t, p->t};
    const auto& fl = std::get<FilterLimit>(h);
    return FilterLimit{1, fl.c, fl.set};
}

// Lazy lattice/linear expression over block functions. Used to evaluate
// homomorphisms on joins, meets, absolute values and linear combinations
// without materializing them: limits along a residue class commute with
// max, min, |.| and linear combinations, so the per-class value is the
// same fold applied to the leaves' per-class limits.
class FnExpr {
public:
    static FnExpr leaf(BlockFunction f) {
        return FnExpr(Node{Leaf{std::move(f)}});
    }
    static FnExpr join(FnExpr l, FnExpr r) { return FnExpr(Node{Binary{Op::join, wrap(l), wrap(r)}}); }
    static FnExpr meet(FnExpr l, FnExpr r) { return FnExpr(Node{Binary{Op::meet, wrap(l), wrap(r)}}); }
    static FnExpr abs(FnExpr e) { return FnExpr(Node{Unary{wrap(e)}}); }
    static FnExpr affine(Rational a, FnExpr l, Rational b, FnExpr r) {
        return FnExpr(Node{Affine{std::move(a), std::move(b), wrap(l), wrap(r)}});
    }

    Rational eval(const Rational& t) const { return eval_node(*node_, t); }

    Rational value_on_class(const Rational& c, std::uint64_t n) const {
        return class_value(*node_, c, n);
    }

    void absorb_context(detail::ClassContext& ctx) const { absorb(*node_, ctx); }

    LimitValue limit_along(const Rational& c, const EventuallyPeriodicSet& set) const {
        detail::ClassContext ctx;
        absorb_context(ctx);
        ctx.absorb(set);
        std::vector<Rational> values;
        for (std::uint64_t n = ctx.n0; n < ctx.n0 + ctx.period; ++n)
            if (set.contains(n)) values.push_back(value_on_class(c, n));
        return LimitValue::from_clusters(std::move(values));
    }

private:
    enum class Op { join, meet };
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Leaf {
        BlockFunction f;
    };
    struct Binary {
        Op op;
        NodePtr l, r;
    };
    struct Unary {
        NodePtr e;
    };
    struct Affine {
        Rational a, b;
        NodePtr l, r;
    };
    struct Node {
        std::variant<Leaf, Binary, Unary, Affine> v;
    };

    explicit FnExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    static NodePtr wrap(const FnExpr& e) { return e.node_; }

    static Rational eval_node(const Node& n, const Rational& t) {
        if (const auto* l = std::get_if<Leaf>(&n.v)) return l->f.eval(t);
        if (const auto* b = std::get_if<Binary>(&n.v)) {
            Rational x = eval_node(*b->l, t), y = eval_node(*b->r, t);
            return b->op == Op::join ? std::max(x, y) : std::min(x, y);
        }
        if (const auto* u = std::get_if<Unary>(&n.v)) return rat_abs(eval_node(*u->e, t));
        const auto& a = std::get<Affine>(n.v);
        return a.a * eval_node(*a.l, t) + a.b * eval_node(*a.r, t);
    }

    static Rational class_value(const Node& n, const Rational& c, std::uint64_t k) {
        if (const auto* l = std::get_if<Leaf>(&n.v)) return detail::class_ratio_limit(l->f, c, k);
        if (const auto* b = std::get_if<Binary>(&n.v)) {
            Rational x = class_value(*b->l, c, k), y = class_value(*b->r, c, k);
            return b->op == Op::join ? std::max(x, y) : std::min(x, y);
        }
        if (const auto* u = std::get_if<Unary>(&n.v)) return rat_abs(class_value(*u->e, c, k));
        const auto& a = std::get<Affine>(n.v);
        return a.a * class_value(*a.l, c, k) + a.b * class_value(*a.r, c, k);
    }

    static void absorb(const Node& n, detail::ClassContext& ctx) {
        if (const auto* l = std::get_if<Leaf>(&n.v)) {
            ctx.absorb(l->f);
            return;
        }
        if (const auto* b = std::get_if<Binary>(&n.v)) {
            absorb(*b->l, ctx);
            absorb(*b->r, ctx);
            return;
        }
        if (const auto* u = std::get_if<Unary>(&n.v)) {
            absorb(*u->e, ctx);
            return;
        }
        const auto& a = std::get<Affine>(n.v);
        absorb(*a.l, ctx);
        absorb(*a.r, ctx);
    }

    NodePtr node_;
};

}  // namespace latline
