#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "latline/errors.hpp"

namespace latline {

// Decidable subset of the nonnegative integers given by a preperiod
// bitstring followed by a repeating period bitstring:
//
//   n in A  iff  pre[n]                      for n < |pre|
//                per[(n - |pre|) mod |per|]  otherwise
//
// Construction canonicalizes (primitive period, minimal preperiod), so
// structural equality coincides with set equality and membership is O(1).
class EventuallyPeriodicSet {
public:
    EventuallyPeriodicSet(std::vector<bool> pre, std::vector<bool> per)
        : pre_(std::move(pre)), per_(std::move(per)) {
        if (per_.empty())
            throw_precondition("BadSetSpec", "period bitstring must be nonempty");
        canonicalize();
    }

    static EventuallyPeriodicSet everything() { return EventuallyPeriodicSet({}, {true}); }
    static EventuallyPeriodicSet nothing() { return EventuallyPeriodicSet({}, {false}); }
    static EventuallyPeriodicSet evens() { return EventuallyPeriodicSet({}, {true, false}); }
    static EventuallyPeriodicSet odds() { return EventuallyPeriodicSet({}, {false, true}); }
    static EventuallyPeriodicSet multiples_of(std::uint64_t k) {
        std::vector<bool> per(k, false);
        per[0] = true;
        return EventuallyPeriodicSet({}, std::move(per));
    }

    const std::vector<bool>& preperiod() const { return pre_; }
    const std::vector<bool>& period() const { return per_; }

    bool contains(std::uint64_t n) const {
        if (n < pre_.size()) return pre_[n];
        return per_[(n - pre_.size()) % per_.size()];
    }

    // Finite iff the canonical period carries no 1.
    bool is_finite() const {
        for (bool b : per_)
            if (b) return false;
        return true;
    }

    bool is_infinite() const { return !is_finite(); }
    bool is_coinfinite() const { return complement().is_infinite(); }

    EventuallyPeriodicSet complement() const {
        std::vector<bool> pre = pre_, per = per_;
        pre.flip();
        per.flip();
        return EventuallyPeriodicSet(std::move(pre), std::move(per));
    }

    // {n + k : n in A}
    EventuallyPeriodicSet shift_forward(std::uint64_t k) const {
        std::vector<bool> pre(k, false);
        pre.insert(pre.end(), pre_.begin(), pre_.end());
        return EventuallyPeriodicSet(std::move(pre), per_);
    }

    // {n : n + k in A}
    EventuallyPeriodicSet shift_back(std::uint64_t k) const {
        if (k <= pre_.size()) {
            std::vector<bool> pre(pre_.begin() + static_cast<std::ptrdiff_t>(k), pre_.end());
            return EventuallyPeriodicSet(std::move(pre), per_);
        }
        std::uint64_t offset = (k - pre_.size()) % per_.size();
        std::vector<bool> per(per_.size());
        for (std::size_t j = 0; j < per_.size(); ++j) per[j] = per_[(j + offset) % per_.size()];
        return EventuallyPeriodicSet({}, std::move(per));
    }

    bool operator==(const EventuallyPeriodicSet&) const = default;

    // (preperiod length, period length, bits) — a stable sort key.
    std::string key() const {
        std::string s;
        s.reserve(pre_.size() + per_.size() + 1);
        for (bool b : pre_) s.push_back(b ? '1' : '0');
        s.push_back('|');
        for (bool b : per_) s.push_back(b ? '1' : '0');
        return s;
    }

private:
    void canonicalize() {
        // Primitive period: the minimal period of an eventually periodic
        // word divides any other period, so it suffices to test divisors.
        for (std::size_t d = 1; d < per_.size(); ++d) {
            if (per_.size() % d != 0) continue;
            bool repeats = true;
            for (std::size_t i = d; i < per_.size() && repeats; ++i)
                repeats = per_[i] == per_[i % d];
            if (repeats) {
                per_.resize(d);
                break;
            }
        }
        // Absorb preperiod bits that already match the rotated period.
        while (!pre_.empty() && pre_.back() == per_.back()) {
            pre_.pop_back();
            per_.insert(per_.begin(), per_.back());
            per_.pop_back();
        }
    }

    std::vector<bool> pre_;
    std::vector<bool> per_;
};

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

namespace detail {

template <class Op>
EventuallyPeriodicSet pointwise(const EventuallyPeriodicSet& a, const EventuallyPeriodicSet& b,
                                Op op) {
    std::size_t lead = std::max(a.preperiod().size(), b.preperiod().size());
    std::size_t period = lcm_u64(a.period().size(), b.period().size());
    std::vector<bool> pre(lead), per(period);
    for (std::size_t n = 0; n < lead; ++n) pre[n] = op(a.contains(n), b.contains(n));
    for (std::size_t j = 0; j < period; ++j) per[j] = op(a.contains(lead + j), b.contains(lead + j));
    return EventuallyPeriodicSet(std::move(pre), std::move(per));
}

}  // namespace detail

inline EventuallyPeriodicSet set_union(const EventuallyPeriodicSet& a,
                                       const EventuallyPeriodicSet& b) {
    return detail::pointwise(a, b, [](bool x, bool y) { return x || y; });
}

inline EventuallyPeriodicSet set_intersection(const EventuallyPeriodicSet& a,
                                              const EventuallyPeriodicSet& b) {
    return detail::pointwise(a, b, [](bool x, bool y) { return x && y; });
}

enum class SetRelation {
    equal_up_to_finite,  // symmetric difference finite
    intersection_finite,
    overlap_infinite,
};

// Trichotomy for two infinite sets; mutually exclusive by construction.
inline SetRelation compare_sets(const EventuallyPeriodicSet& a, const EventuallyPeriodicSet& b) {
    if (a.is_finite() || b.is_finite())
        throw_precondition("BothMustBeInfinite", "set comparison requires two infinite sets");
    std::size_t lead = std::max(a.preperiod().size(), b.preperiod().size());
    std::size_t period = lcm_u64(a.period().size(), b.period().size());
    bool symdiff_finite = true, intersection_finite = true;
    for (std::size_t j = 0; j < period; ++j) {
        bool x = a.contains(lead + j), y = b.contains(lead + j);
        if (x != y) symdiff_finite = false;
        if (x && y) intersection_finite = false;
    }
    if (symdiff_finite) return SetRelation::equal_up_to_finite;
    if (intersection_finite) return SetRelation::intersection_finite;
    return SetRelation::overlap_infinite;
}

}  // namespace latline
