#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace pathreg {

/// Arbitrary-precision exact rational. Sufficient statistics, regime
/// boundaries and the Simpson inequalities are evaluated in this type.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Parses "3", "-7/13", "0.25" or "1e-3" exactly. Throws Error(InvalidArgument).
Rational parse_rational(std::string_view text);

int sign(const Rational& value);

}  // namespace pathreg
