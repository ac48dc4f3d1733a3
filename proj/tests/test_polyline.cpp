#include <catch2/catch_amalgamated.hpp>

#include <latline/polyline.hpp>

#include "support/corpus.hpp"

using namespace latline;
using testsupport::Rng;

namespace {

Polyline pl(std::initializer_list<std::pair<int, int>> pts) {
    std::vector<Breakpoint> v;
    for (auto [x, y] : pts) v.push_back({Rational(x), Rational(y)});
    return Polyline(std::move(v));
}

Polyline random_polyline(Rng& rng, const Rational& lo, const Rational& hi, int segments) {
    std::vector<Breakpoint> pts;
    pts.push_back({lo, rng.rational(-5, 5)});
    for (int i = 1; i < segments; ++i) {
        Rational x = lo + (hi - lo) * Rational(i) / segments + rng.rational(0, 1, 9) / (4 * segments);
        if (x <= pts.back().x || x >= hi) continue;
        pts.push_back({x, rng.rational(-5, 5)});
    }
    pts.push_back({hi, rng.rational(-5, 5)});
    return Polyline(std::move(pts));
}

}  // namespace

TEST_CASE("polyline evaluation interpolates exactly") {
    CHECK(pl({{1, 1}, {2, 2}}).eval(Rational(3, 2)) == Rational(3, 2));
    // f(t) = (1-s) f(2) + s f(4) with s = 1/2
    CHECK(pl({{2, 0}, {4, 4}}).eval(3) == 2);
    CHECK(pl({{1, 5}, {3, 5}}).eval(2) == 5);
    CHECK(pl({{1, 0}, {2, 1}}).eval(2) == 1);
    CHECK_THROWS_AS(pl({{1, 0}, {2, 1}}).eval(3), Error);
}

TEST_CASE("polyline construction enforces invariants and normalizes") {
    CHECK_THROWS_AS(Polyline({{Rational(1), Rational(0)}}), Error);
    CHECK_THROWS_AS(Polyline({{Rational(2), Rational(0)}, {Rational(1), Rational(0)}}), Error);
    // collinear interior breakpoints are removed
    Polyline p({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}, {Rational(3), Rational(3)}});
    CHECK(p.points().size() == 2);
    CHECK(p == pl({{1, 1}, {3, 3}}));
}

TEST_CASE("lattice combine computes crossings exactly") {
    // -1 + (x - 1) crosses 0 at x = 2
    Polyline j = join(pl({{1, 0}, {3, 0}}), pl({{1, -1}, {3, 1}}));
    CHECK(j == Polyline({{Rational(1), Rational(0)}, {Rational(2), Rational(0)}, {Rational(3), Rational(1)}}));

    Polyline p = pl({{1, 0}, {2, 3}, {3, -1}});
    CHECK(join(p, p) == p);
    CHECK(meet(pl({{1, 1}, {2, 1}}), pl({{1, 0}, {2, 0}})) == pl({{1, 0}, {2, 0}}));
    CHECK_THROWS_AS(join(pl({{1, 0}, {2, 0}}), pl({{1, 0}, {3, 0}})), Error);
}

TEST_CASE("affine combine is exact") {
    Polyline p = pl({{1, 1}, {2, 2}});
    CHECK(affine_combine(1, p, -1, p) == Polyline::constant(1, 2, 0));
    CHECK(affine_combine(2, p, 0, p) == pl({{1, 2}, {2, 4}}));
    CHECK(affine_combine(1, pl({{1, 1}, {2, 0}}), 1, pl({{1, 0}, {2, 1}})) ==
          Polyline::constant(1, 2, 1));
}

TEST_CASE("lipschitz constant is the max segment slope") {
    CHECK(lipschitz_constant(pl({{1, 1}, {2, 2}})) == 1);
    CHECK(lipschitz_constant(pl({{2, 0}, {4, 4}})) == 2);
    CHECK(lipschitz_constant(Polyline::constant(1, 5, 7)) == 0);
}

TEST_CASE("max deviation is the exact sup norm of the difference") {
    Polyline p = pl({{1, 0}, {3, 0}});
    CHECK(max_deviation(p, p) == 0);
    CHECK(max_deviation(p, pl({{1, 0}, {2, 1}, {3, 0}})) == 1);
    CHECK(max_deviation(pl({{1, 0}, {2, 2}}), pl({{1, 2}, {2, 0}})) == 2);
}

TEST_CASE("lattice and affine laws hold exactly on random polylines") {
    Rng rng(20240601);
    for (int iter = 0; iter < 40; ++iter) {
        Polyline p = random_polyline(rng, 1, 9, 5);
        Polyline q = random_polyline(rng, 1, 9, 4);
        Polyline jo = join(p, q);
        Polyline me = meet(p, q);
        CHECK(lipschitz_constant(jo) <= std::max(lipschitz_constant(p), lipschitz_constant(q)));
        for (int k = 0; k < 12; ++k) {
            Rational t = 1 + Rational(rng.range(0, 64), 8);
            CHECK(jo.eval(t) == std::max(p.eval(t), q.eval(t)));
            CHECK(me.eval(t) == std::min(p.eval(t), q.eval(t)));
        }
        Rational a = rng.rational(-4, 4, 3), b = rng.rational(-4, 4, 3);
        Polyline lin = affine_combine(a, p, b, q);
        for (int k = 0; k < 8; ++k) {
            Rational t = 1 + Rational(rng.range(0, 64), 8);
            CHECK(lin.eval(t) == a * p.eval(t) + b * q.eval(t));
        }
        // Lipschitz inequality, sampled
        Rational L = lipschitz_constant(p);
        for (int k = 0; k < 8; ++k) {
            Rational s = 1 + Rational(rng.range(0, 64), 8);
            Rational t = 1 + Rational(rng.range(0, 64), 8);
            CHECK(rat_abs(p.eval(s) - p.eval(t)) <= L * rat_abs(s - t));
        }
    }
}
