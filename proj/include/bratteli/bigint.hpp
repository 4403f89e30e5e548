#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace bratteli {

/// Arbitrary-precision integer used for all dimension arithmetic.
using Int = boost::multiprecision::cpp_int;

/// Exact rational built on Int.
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_string(const Int& v) { return v.str(); }

inline std::string to_string(const Rat& v) {
    Int num = boost::multiprecision::numerator(v);
    Int den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

/// Floor of the integer square root; v must be non-negative.
inline Int isqrt_floor(const Int& v) {
    if (v < 0) throw std::domain_error("isqrt_floor: negative argument");
    return boost::multiprecision::sqrt(v);
}

/// True iff v is a perfect square (v >= 0).
inline bool is_perfect_square(const Int& v) {
    if (v < 0) return false;
    Int r = boost::multiprecision::sqrt(v);
    return r * r == v;
}

}  // namespace bratteli
