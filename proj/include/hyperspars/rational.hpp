#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hyperspars {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p", "p/q" and "d.ddd". Negative values and q = 0 are rejected.
// Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace hyperspars
