#pragma once

#include <utility>
#include <variant>

#include "latline/block_function.hpp"
#include "latline/constructions.hpp"
#include "latline/eps_set.hpp"
#include "latline/errors.hpp"
#include "latline/hom.hpp"

namespace latline {

// One side of the identification question: the descriptor (c, A) for the
// functional f |-> lim_{n in A} f(c 2^n)/(c 2^n).
struct ScaleAndSet {
    Rational c;  // in [1, 2]
    EventuallyPeriodicSet set;
};

struct Equivalent {};
struct ConsistentOverlap {};
struct Separated {
    BlockFunction witness;
    Rational left_value;
    Rational right_value;
};
using EquivalenceResult = std::variant<Equivalent, Separated, ConsistentOverlap>;

// Decides whether two descriptors induce the same functional, are
// provably separated by an explicit witness function, or share an
// infinite core of blocks (where no witness can exist and the two partial
// functionals agree wherever both are defined).
//
// The only gluing across scales is (2, A) = (1, 1 + A), so both sides are
// normalized to scales in [1, 2) first. Witness values are re-evaluated,
// not assumed.
inline EquivalenceResult classify_equivalence(ScaleAndSet left, ScaleAndSet right) {
    auto check = [](ScaleAndSet& s) {
        if (s.c < 1 || s.c > 2)
            throw_precondition("BadRange", "descriptor scale must lie in [1, 2]");
        if (s.set.is_finite())
            throw_precondition("DegenerateSet", "descriptor set must be infinite");
        if (s.c == 2) {
            s.c = 1;
            s.set = s.set.shift_forward(1);
        }
    };
    check(left);
    check(right);

    auto separated = [&](BlockFunction witness) {
        Rational lv = evaluate(HomSpec(hom_filter(1, left.c, left.set)), witness);
        Rational rv = evaluate(HomSpec(hom_filter(1, right.c, right.set)), witness);
        return EquivalenceResult(Separated{std::move(witness), std::move(lv), std::move(rv)});
    };

    if (left.c == right.c) {
        switch (compare_sets(left.set, right.set)) {
            case SetRelation::equal_up_to_finite:
                return Equivalent{};
            case SetRelation::intersection_finite:
                return separated(set_witness_function_at(left.c, left.set, right.set));
            case SetRelation::overlap_infinite:
                return ConsistentOverlap{};
        }
    }
    if (compare_sets(left.set, right.set) == SetRelation::equal_up_to_finite)
        return separated(scale_witness_function(left.c, right.c));
    return separated(gated_scale_witness_function(left.c, left.set, right.c));
}

}  // namespace latline
