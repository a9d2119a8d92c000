// rational.hpp
// Exact arbitrary-precision integers and rationals used by the bound
// model and the scan. Backed by boost::multiprecision; cpp_rational
// keeps values canonical (lowest terms, positive denominator), so every
// comparison is an exact cross-multiplication and nothing here rounds.

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace goldbach {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    const BigInt den = denominator(r);
    std::string s = numerator(r).str();
    if (den != 1) {
        s += '/';
        s += den.str();
    }
    return s;
}

} // namespace goldbach
