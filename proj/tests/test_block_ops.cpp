#include <catch2/catch_amalgamated.hpp>

#include <latline/block_ops.hpp>
#include <latline/constructions.hpp>

#include "support/corpus.hpp"

using namespace latline;
using testsupport::Rng;

TEST_CASE("lattice combine on comparable functions") {
    auto evens = EventuallyPeriodicSet::evens();
    BlockFunction f = set_witness_function(evens);
    BlockFunction t = BlockFunction::identity();
    BlockFunction zero = BlockFunction::constant(0);

    CHECK(join(f, f) == f);
    CHECK(join(t, zero) == t);
    CHECK(join(f, zero) == f);
    CHECK(meet(f, zero) == zero);
    CHECK(meet(f, t) == f);  // the witness stays below the identity
}

TEST_CASE("lattice combine inserts exact fixed crossings") {
    BlockFunction t = BlockFunction::identity();
    CHECK(join(t, scale(Rational(1, 2), t)) == t);

    // f changes sign inside every block; pure-a differences are always
    // proportional, so |f| is exact with crossing anchors at fixed c
    BlockFunction f = BlockFunction::single_template(BlockTemplate(
        {{Rational(1), {1, 0, 0}}, {Rational(3, 2), {-1, 0, 0}}, {Rational(2), {2, 0, 0}}}));
    BlockFunction a = latline::abs(f);
    Rng rng(11);
    for (int k = 0; k < 40; ++k) {
        Rational x = rng.point(12);
        CHECK(a.eval(x) == rat_abs(f.eval(x)));
        CHECK(a.eval(x) >= 0);
    }
}

TEST_CASE("join eval commutes with pointwise max") {
    Rng rng(42);
    auto corpus = testsupport::build_corpus(rng, 20);
    int materialized = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const BlockFunction& f = corpus[rng.below(corpus.size())];
        const BlockFunction& g = corpus[rng.below(corpus.size())];
        try {
            BlockFunction j = join(f, g);
            BlockFunction m = meet(f, g);
            ++materialized;
            for (int k = 0; k < 10; ++k) {
                Rational x = rng.point(16);
                CHECK(j.eval(x) == std::max(f.eval(x), g.eval(x)));
                CHECK(m.eval(x) == std::min(f.eval(x), g.eval(x)));
            }
        } catch (const Error& e) {
            CHECK((e.name() == "StabilizationFailure" || e.name() == "TooManyDrivers"));
        }
    }
    CHECK(materialized > 10);
}

TEST_CASE("mixed-order dominance locks after finitely many blocks") {
    // log against a constant: the log wins from block 6 on; the earlier
    // blocks become exact per-block overrides
    BlockFunction log2ish = BlockFunction::dyadic_log();
    BlockFunction five = BlockFunction::constant(5);
    BlockFunction j = join(log2ish, five);
    Rng rng(21);
    for (int k = 0; k < 60; ++k) {
        Rational x = rng.point(14);
        CHECK(j.eval(x) == std::max(log2ish.eval(x), five.eval(x)));
    }
    CHECK(j.eval(3) == 5);
    CHECK(j.eval(rat_pow2(20)) == 20);

    BlockFunction m = meet(log2ish, five);
    CHECK(m.eval(3) == log2ish.eval(3));
    CHECK(m.eval(rat_pow2(20)) == 5);
}

TEST_CASE("a block-dependent crossing is refused, not approximated") {
    // The witness climbs 0 -> 2^{n+1} on some blocks; against the constant 1
    // the crossing sits at 2^n + 1/2, which is no fixed c. The exact max is
    // not representable and the combine must say so.
    BlockFunction f = set_witness_function(EventuallyPeriodicSet::evens());
    BlockFunction one = BlockFunction::constant(1);
    CHECK_THROWS_AS(join(f, one), Error);
    try {
        join(f, one);
    } catch (const Error& e) {
        CHECK(e.name() == "StabilizationFailure");
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("affine combine is exact and total") {
    auto evens = EventuallyPeriodicSet::evens();
    auto odds = EventuallyPeriodicSet::odds();
    BlockFunction f = set_witness_function(evens);
    BlockFunction g = set_witness_function(odds);
    // the two witnesses tile the dyadic grid: their sum is the identity at
    // every 2^n, with matching interpolation in between
    CHECK(affine_combine(1, f, 1, g) == BlockFunction::identity());
    CHECK(scale(2, BlockFunction::identity()).eval(7) == 14);

    Rng rng(314);
    auto corpus = testsupport::build_corpus(rng, 16);
    for (int iter = 0; iter < 40; ++iter) {
        const BlockFunction& p = corpus[rng.below(corpus.size())];
        const BlockFunction& q = corpus[rng.below(corpus.size())];
        Rational a = rng.rational(-3, 3), b = rng.rational(-3, 3);
        try {
            BlockFunction s = affine_combine(a, p, b, q);
            for (int k = 0; k < 8; ++k) {
                Rational x = rng.point(16);
                CHECK(s.eval(x) == a * p.eval(x) + b * q.eval(x));
            }
        } catch (const Error& e) {
            CHECK(e.name() == "TooManyDrivers");
        }
    }
}

TEST_CASE("lipschitz constants of the archetypes") {
    CHECK(lipschitz_constant(BlockFunction::identity()) == 1);
    CHECK(lipschitz_constant(BlockFunction::constant(1)) == 0);
    CHECK(lipschitz_constant(BlockFunction::dyadic_log()) == 1);  // steepest on block 0

    Rng rng(5);
    for (int k = 0; k < 10; ++k) {
        auto A = testsupport::random_infinite_coinfinite_set(rng);
        CHECK(lipschitz_constant(set_witness_function(A)) == 2);
    }
}

TEST_CASE("lipschitz constant is sound on 10^4 random pairs") {
    Rng rng(606);
    auto corpus = testsupport::build_corpus(rng, 20);
    for (const auto& f : corpus) {
        Rational L = lipschitz_constant(f);
        for (int k = 0; k < 500; ++k) {
            Rational s = rng.point(20), t = rng.point(20);
            CHECK(rat_abs(f.eval(s) - f.eval(t)) <= L * rat_abs(s - t));
        }
    }
}

TEST_CASE("growth rate ignores bounded and log-like terms") {
    CHECK(growth_rate(BlockFunction::identity()) == 1);
    CHECK(growth_rate(BlockFunction::constant(1)) == 0);
    CHECK(growth_rate(BlockFunction::dyadic_log()) == 0);
    CHECK(growth_rate(set_witness_function(EventuallyPeriodicSet::evens())) == 1);
    CHECK(growth_rate(scale(Rational(-3, 4), BlockFunction::identity())) == Rational(3, 4));
}

TEST_CASE("boundedness and its partial converse") {
    CHECK(is_bounded(BlockFunction::constant(5)));
    CHECK_FALSE(is_bounded(BlockFunction::identity()));
    BlockFunction log_like = BlockFunction::dyadic_log();
    CHECK_FALSE(is_bounded(log_like));
    CHECK(growth_rate(log_like) == 0);  // unbounded with zero growth rate

    Rng rng(777);
    auto corpus = testsupport::build_corpus(rng, 30);
    for (const auto& f : corpus) {
        if (is_bounded(f)) CHECK(growth_rate(f) == 0);
        if (growth_rate(f) == 0 && !is_bounded(f)) {
            // exactly the log-like case: some recurrent anchor has b != 0
            bool has_log_term = false;
            for (std::size_t id : detail::realized_templates(f))
                for (const BlockAnchor& a : f.templates()[id].anchors())
                    if (a.value.b != 0) has_log_term = true;
            CHECK(has_log_term);
        }
    }
}

TEST_CASE("domination coefficient certifies c|f| <= t") {
    CHECK(domination_coefficient(BlockFunction::constant(5)) == Rational(1, 5));
    CHECK(domination_coefficient(BlockFunction::identity()) == 1);
    CHECK(domination_coefficient(BlockFunction::constant(0)) == 1);  // zero function convention
    CHECK(domination_coefficient(BlockFunction::dyadic_log()) == 2);  // sup n/2^n = 1/2

    Rng rng(909);
    auto corpus = testsupport::build_corpus(rng, 20);
    for (const auto& f : corpus) {
        Rational c = domination_coefficient(f);
        CHECK(c > 0);
        for (int k = 0; k < 40; ++k) {
            Rational t = rng.point(20);
            CHECK(c * rat_abs(f.eval(t)) <= t);
        }
    }
}
