#include <catch2/catch_amalgamated.hpp>

#include <latline/equivalence.hpp>

#include "support/corpus.hpp"

using namespace latline;
using testsupport::Rng;

namespace {
const EventuallyPeriodicSet evens = EventuallyPeriodicSet::evens();
const EventuallyPeriodicSet odds = EventuallyPeriodicSet::odds();
const EventuallyPeriodicSet mult4 = EventuallyPeriodicSet::multiples_of(4);

LimitValue limit_of(const ScaleAndSet& s, const BlockFunction& f) {
    ScaleAndSet n = s;
    if (n.c == 2) {
        n.c = 1;
        n.set = n.set.shift_forward(1);
    }
    return filter_limit(hom_filter(1, n.c, n.set), f);
}
}  // namespace

TEST_CASE("the only identification is (2, A) = (1, 1 + A)") {
    CHECK(std::holds_alternative<Equivalent>(classify_equivalence({2, evens}, {1, odds})));
    CHECK(std::holds_alternative<Equivalent>(classify_equivalence({1, evens}, {2, odds})));
    CHECK(std::holds_alternative<Equivalent>(classify_equivalence({2, evens}, {2, evens})));
    CHECK(std::holds_alternative<Separated>(classify_equivalence({2, evens}, {1, evens})));
}

TEST_CASE("same scale, essentially disjoint sets are separated with values (1, 0)") {
    auto res = classify_equivalence({1, evens}, {1, odds});
    REQUIRE(std::holds_alternative<Separated>(res));
    const auto& sep = std::get<Separated>(res);
    CHECK(sep.left_value == 1);
    CHECK(sep.right_value == 0);
}

TEST_CASE("distinct scales are separated") {
    auto res = classify_equivalence({1, evens}, {Rational(3, 2), evens});
    REQUIRE(std::holds_alternative<Separated>(res));
    CHECK(std::get<Separated>(res).left_value == 1);
    CHECK(std::get<Separated>(res).right_value == 0);

    // overlapping sets at distinct scales use the gated witness
    auto res2 = classify_equivalence({Rational(3, 2), mult4}, {1, evens});
    REQUIRE(std::holds_alternative<Separated>(res2));
    CHECK(std::get<Separated>(res2).left_value == 1);
    CHECK(std::get<Separated>(res2).right_value == 0);
}

TEST_CASE("shared infinite core yields ConsistentOverlap") {
    CHECK(std::holds_alternative<ConsistentOverlap>(classify_equivalence({1, evens}, {1, mult4})));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(classify_equivalence({Rational(5, 2), evens}, {1, evens}), Error);
    CHECK_THROWS_AS(classify_equivalence({1, EventuallyPeriodicSet::nothing()}, {1, evens}), Error);
}

TEST_CASE("verdicts are sound against the corpus") {
    Rng rng(404);
    auto corpus = testsupport::build_corpus(rng, 25);

    SECTION("equivalent pairs agree everywhere, including cluster sets") {
        ScaleAndSet left{2, evens}, right{1, odds};
        REQUIRE(std::holds_alternative<Equivalent>(classify_equivalence(left, right)));
        for (const auto& f : corpus) CHECK(limit_of(left, f) == limit_of(right, f));
    }

    SECTION("separated pairs really take the reported values") {
        auto res = classify_equivalence({Rational(9, 8), evens}, {Rational(9, 8), odds});
        REQUIRE(std::holds_alternative<Separated>(res));
        const auto& sep = std::get<Separated>(res);
        CHECK(evaluate(HomSpec(hom_filter(1, Rational(9, 8), evens)), sep.witness) ==
              sep.left_value);
        CHECK(evaluate(HomSpec(hom_filter(1, Rational(9, 8), odds)), sep.witness) ==
              sep.right_value);
    }

    SECTION("consistent overlap: equal values wherever both are defined") {
        ScaleAndSet left{1, evens}, right{1, mult4};
        REQUIRE(std::holds_alternative<ConsistentOverlap>(classify_equivalence(left, right)));
        int both_defined = 0;
        for (const auto& f : corpus) {
            LimitValue a = limit_of(left, f), b = limit_of(right, f);
            if (!a.divergent() && !b.divergent()) {
                ++both_defined;
                CHECK(a.value() == b.value());
            }
        }
        CHECK(both_defined > 0);
    }
}
