#include <catch2/catch_amalgamated.hpp>

#include <latline/block_function.hpp>
#include <latline/constructions.hpp>

#include "support/corpus.hpp"

using namespace latline;
using testsupport::Rng;

TEST_CASE("anchor values are affine in (2^n, n)") {
    AnchorValue v{Rational(3, 2), Rational(-1), Rational(5)};
    CHECK(v.at(0) == Rational(3, 2) + 5);
    CHECK(v.at(4) == Rational(3, 2) * 16 - 4 + 5);
}

TEST_CASE("template interpolation commutes with evaluation") {
    BlockTemplate t({{Rational(1), {1, 0, 0}},
                     {Rational(3, 2), {0, 2, 1}},
                     {Rational(2), {2, 0, 0}}});
    Rng rng(7);
    for (int k = 0; k < 30; ++k) {
        Rational c = 1 + Rational(rng.range(0, 8), 8);
        for (std::uint64_t n : {0, 3, 9}) {
            // interpolate the triple, then evaluate == evaluate both anchors, then interpolate
            Rational direct = t.block_polyline(n).eval(c * rat_pow2(n));
            CHECK(t.value_at(c).at(n) == direct);
        }
    }
}

TEST_CASE("validate accepts the archetypes") {
    CHECK(validate(BlockFunction::identity().data()).is_ok());
    CHECK(validate(BlockFunction::constant(Rational(9, 7)).data()).is_ok());
    CHECK(validate(BlockFunction::dyadic_log().data()).is_ok());
    CHECK(validate(set_witness_function(EventuallyPeriodicSet::evens()).data()).is_ok());
}

TEST_CASE("validate rejects malformed templates") {
    BlockFunctionData d;
    d.templates = {BlockTemplate({{Rational(1), {0, 0, 0}}})};  // single anchor
    d.selector = {0};
    CHECK(validate(d).status == Validation::Status::bad_template);

    d.templates = {BlockTemplate({{Rational(1), {0, 0, 0}}, {Rational(3, 2), {0, 0, 0}}})};
    CHECK(validate(d).status == Validation::Status::bad_template);  // last anchor not at 2

    d.templates = {BlockTemplate::two_point({0, 0, 0}, {0, 0, 0})};
    d.selector = {0, 1};  // wrong selector size
    CHECK(validate(d).status == Validation::Status::bad_template);
}

TEST_CASE("validate reports the first seam violation") {
    // block n ends at height 2^{n+1} but block n+1 starts at 0
    BlockFunctionData d;
    d.templates = {BlockTemplate::two_point({0, 0, 0}, {2, 0, 0})};
    d.selector = {0};
    Validation v = validate(d);
    CHECK(v.status == Validation::Status::seam_violation);
    CHECK(v.seam_block == 0);

    // numeric violation only inside the preperiod
    BlockFunctionData p;
    p.templates = {BlockTemplate::two_point({1, 0, 0}, {2, 0, 0}),
                   BlockTemplate::two_point({0, 0, 7}, {0, 0, 7})};
    p.selector = {0};
    p.overrides[2] = 1;
    Validation w = validate(p);
    CHECK(w.status == Validation::Status::seam_violation);
    CHECK(w.seam_block == 1);
}

TEST_CASE("evaluation locates the dyadic block") {
    BlockFunction t = BlockFunction::identity();
    CHECK(t.eval(5) == 5);
    CHECK(t.eval(Rational(1)) == 1);
    CHECK(t.eval(rat_pow2(40)) == rat_pow2(40));

    BlockFunction f = set_witness_function(EventuallyPeriodicSet::evens());
    CHECK(f.eval(3) == 2);  // interpolates f(2) = 0, f(4) = 4 at s = 1/2
    CHECK(f.eval(1) == 1);  // 0 is in the set
    CHECK_THROWS_AS(f.eval(Rational(1, 2)), Error);
}

TEST_CASE("template_at resolves overrides then the selector") {
    BlockFunction f = set_witness_function(EventuallyPeriodicSet::evens());
    const BlockTemplate& t0 = f.template_at(0);
    CHECK(t0.anchors().front().value == AnchorValue{1, 0, 0});
    CHECK(t0.anchors().back().value == AnchorValue{0, 0, 0});

    BlockFunction id = BlockFunction::identity();
    CHECK(id.template_at(0) == id.template_at(17));

    BlockFunctionData d;
    d.templates = {BlockTemplate::two_point({1, 0, 0}, {2, 0, 0}),
                   BlockTemplate({{Rational(1), {1, 0, 0}},
                                  {Rational(3, 2), {5, 0, 0}},
                                  {Rational(2), {2, 0, 0}}})};
    d.selector = {0};
    d.overrides[3] = 1;
    BlockFunction g(std::move(d));
    CHECK(g.template_at(3).anchors().size() == 3);
    CHECK(g.template_at(2).anchors().size() == 2);
}

TEST_CASE("construction rejects invalid data") {
    BlockFunctionData d;
    d.templates = {BlockTemplate::two_point({0, 0, 0}, {2, 0, 0})};
    d.selector = {0};
    CHECK_THROWS_AS(BlockFunction(std::move(d)), Error);
}

TEST_CASE("normalization gives structural equality for equal presentations") {
    // same function presented with a redundant collinear anchor and a
    // redundant override
    BlockFunctionData d;
    d.templates = {BlockTemplate({{Rational(1), {1, 0, 0}},
                                  {Rational(3, 2), {Rational(3, 2), 0, 0}},
                                  {Rational(2), {2, 0, 0}}}),
                   BlockTemplate::two_point({1, 0, 0}, {2, 0, 0})};
    d.selector = {0};
    d.overrides[5] = 1;
    CHECK(BlockFunction(std::move(d)) == BlockFunction::identity());
}

TEST_CASE("normalization is idempotent") {
    Rng rng(64);
    auto corpus = testsupport::build_corpus(rng, 24);
    for (const auto& f : corpus) {
        BlockFunction again(BlockFunctionData(f.data()));
        CHECK(again == f);
    }
}

TEST_CASE("blockEval agrees with brute-force template expansion") {
    Rng rng(2024);
    auto corpus = testsupport::build_corpus(rng, 24);
    for (const auto& f : corpus) {
        for (std::uint64_t n = 0; n <= 40; ++n) {
            for (const BlockAnchor& a : f.template_at(n).anchors()) {
                CHECK(f.eval(a.c * rat_pow2(n)) == a.value.at(n));
            }
        }
    }
}

TEST_CASE("restriction reproduces evaluation") {
    Rng rng(99);
    auto corpus = testsupport::build_corpus(rng, 10);
    for (const auto& f : corpus) {
        Polyline p = f.restrict(Rational(3, 2), Rational(300));
        for (int k = 0; k < 25; ++k) {
            Rational t = Rational(3, 2) + Rational(rng.range(0, 2388), 8);
            CHECK(p.eval(t) == f.eval(t));
        }
    }
}
