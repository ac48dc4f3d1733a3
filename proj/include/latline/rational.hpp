#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

#include "latline/errors.hpp"

namespace latline {

// All scalar arithmetic in the library is exact. Every identity we test is
// an equality of rationals, so there is no floating point anywhere.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Integer pow2(std::uint64_t n) { return Integer(1) << n; }

inline Rational rat_pow2(std::uint64_t n) { return Rational(pow2(n)); }

inline Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline int rat_sign(const Rational& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

// Largest n with 2^n <= x. Requires x >= 1.
inline std::uint64_t floor_log2(const Rational& x) {
    if (x < 1) throw_precondition("BadRange", "floor_log2 requires x >= 1");
    Integer q = numerator(x) / denominator(x);  // floor, both positive
    return static_cast<std::uint64_t>(boost::multiprecision::msb(q));
}

inline Integer floor_int(const Rational& x) {
    Integer n = numerator(x), d = denominator(x);  // d > 0
    Integer q = n / d;                             // truncates toward zero
    if (n < 0 && q * d != n) --q;
    return q;
}

inline Integer ceil_int(const Rational& x) { return -floor_int(-x); }

inline bool is_integer(const Rational& x) { return denominator(x) == 1; }

// True iff the denominator is a power of two.
inline bool is_dyadic(const Rational& x) {
    Integer d = denominator(x);
    return (d & (d - 1)) == 0;
}

inline std::string to_string(const Rational& x) {
    std::ostringstream oss;
    oss << x;
    return oss.str();
}

inline std::string to_string(const Integer& x) {
    std::ostringstream oss;
    oss << x;
    return oss.str();
}

}  // namespace latline
