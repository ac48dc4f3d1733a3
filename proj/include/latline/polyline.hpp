#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "latline/errors.hpp"
#include "latline/rational.hpp"

namespace latline {

struct Breakpoint {
    Rational x;
    Rational y;
    bool operator==(const Breakpoint&) const = default;
};

// Finite piecewise-linear function on the closed interval
// [points.front().x, points.back().x], evaluated by exact linear
// interpolation between breakpoints. Breakpoints have strictly increasing
// x; collinear interior breakpoints are removed on construction, so two
// polylines are equal as functions iff their breakpoint vectors are equal.
class Polyline {
public:
    explicit Polyline(std::vector<Breakpoint> points) : points_(std::move(points)) {
        if (points_.size() < 2)
            throw_precondition("BadPolyline", "a polyline needs at least two breakpoints");
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (!(points_[i - 1].x < points_[i].x))
                throw_precondition("BadPolyline", "breakpoint x values must be strictly increasing");
        normalize();
    }

    static Polyline constant(const Rational& x0, const Rational& x1, const Rational& y) {
        return Polyline({{x0, y}, {x1, y}});
    }

    const std::vector<Breakpoint>& points() const { return points_; }
    const Rational& domain_lo() const { return points_.front().x; }
    const Rational& domain_hi() const { return points_.back().x; }

    Rational eval(const Rational& t) const {
        if (t < domain_lo() || t > domain_hi())
            throw_domain("OutOfDomain", "evaluation point " + to_string(t) + " outside [" +
                                            to_string(domain_lo()) + ", " + to_string(domain_hi()) + "]");
        auto it = std::lower_bound(points_.begin(), points_.end(), t,
                                   [](const Breakpoint& p, const Rational& v) { return p.x < v; });
        if (it != points_.end() && it->x == t) return it->y;
        const Breakpoint& hi = *it;
        const Breakpoint& lo = *(it - 1);
        Rational s = (t - lo.x) / (hi.x - lo.x);
        return lo.y + s * (hi.y - lo.y);
    }

    bool operator==(const Polyline& other) const = default;

private:
    void normalize() {
        std::vector<Breakpoint> out;
        out.reserve(points_.size());
        for (const Breakpoint& p : points_) {
            while (out.size() >= 2) {
                const Breakpoint& a = out[out.size() - 2];
                const Breakpoint& b = out.back();
                // b lies on segment a--p ?
                if ((b.y - a.y) * (p.x - a.x) == (p.y - a.y) * (b.x - a.x))
                    out.pop_back();
                else
                    break;
            }
            out.push_back(p);
        }
        points_ = std::move(out);
    }

    std::vector<Breakpoint> points_;
};

enum class LatticeKind { join, meet };

namespace detail {

inline void require_same_domain(const Polyline& p, const Polyline& q) {
    if (p.domain_lo() != q.domain_lo() || p.domain_hi() != q.domain_hi())
        throw_precondition("DomainMismatch", "polylines must share a domain");
}

// Merged breakpoint grid of two polylines with both functions evaluated at
// every grid point.
struct AlignedGrid {
    std::vector<Rational> x;
    std::vector<Rational> p;
    std::vector<Rational> q;
};

inline AlignedGrid align(const Polyline& p, const Polyline& q) {
    require_same_domain(p, q);
    AlignedGrid g;
    g.x.reserve(p.points().size() + q.points().size());
    for (const auto& bp : p.points()) g.x.push_back(bp.x);
    for (const auto& bp : q.points()) g.x.push_back(bp.x);
    std::sort(g.x.begin(), g.x.end());
    g.x.erase(std::unique(g.x.begin(), g.x.end()), g.x.end());
    g.p.reserve(g.x.size());
    g.q.reserve(g.x.size());
    for (const auto& x : g.x) {
        g.p.push_back(p.eval(x));
        g.q.push_back(q.eval(x));
    }
    return g;
}

}  // namespace detail

// Exact pointwise max (join) or min (meet). Output breakpoints are the
// merged input grid plus every strict segment crossing, each solved
// exactly; collinear overlaps contribute nothing extra.
inline Polyline combine(LatticeKind kind, const Polyline& p, const Polyline& q) {
    detail::AlignedGrid g = detail::align(p, q);
    const bool take_max = kind == LatticeKind::join;
    std::vector<Breakpoint> out;
    out.reserve(g.x.size() + 4);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        if (i > 0) {
            Rational d0 = g.p[i - 1] - g.q[i - 1];
            Rational d1 = g.p[i] - g.q[i];
            if (rat_sign(d0) * rat_sign(d1) < 0) {
                Rational s = d0 / (d0 - d1);
                Rational x = g.x[i - 1] + s * (g.x[i] - g.x[i - 1]);
                Rational y = g.p[i - 1] + s * (g.p[i] - g.p[i - 1]);
                out.push_back({x, y});
            }
        }
        const Rational& y =
            take_max ? std::max(g.p[i], g.q[i]) : std::min(g.p[i], g.q[i]);
        out.push_back({g.x[i], y});
    }
    return Polyline(std::move(out));
}

inline Polyline join(const Polyline& p, const Polyline& q) { return combine(LatticeKind::join, p, q); }
inline Polyline meet(const Polyline& p, const Polyline& q) { return combine(LatticeKind::meet, p, q); }

// Exact a*p + b*q on the merged grid.
inline Polyline affine_combine(const Rational& a, const Polyline& p, const Rational& b,
                               const Polyline& q) {
    detail::AlignedGrid g = detail::align(p, q);
    std::vector<Breakpoint> out;
    out.reserve(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i)
        out.push_back({g.x[i], a * g.p[i] + b * g.q[i]});
    return Polyline(std::move(out));
}

// Best Lipschitz constant on the domain: max over segments of |dy/dx|.
inline Rational lipschitz_constant(const Polyline& p) {
    Rational best = 0;
    const auto& pts = p.points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Rational slope = rat_abs((pts[i].y - pts[i - 1].y) / (pts[i].x - pts[i - 1].x));
        if (slope > best) best = slope;
    }
    return best;
}

// Exact sup norm of p - q; the difference is linear between merged grid
// points, so the sup is attained at one of them.
inline Rational max_deviation(const Polyline& p, const Polyline& q) {
    detail::AlignedGrid g = detail::align(p, q);
    Rational best = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        Rational d = rat_abs(g.p[i] - g.q[i]);
        if (d > best) best = d;
    }
    return best;
}

}  // namespace latline
