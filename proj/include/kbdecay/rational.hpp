// Exact rational helpers on top of boost::multiprecision::cpp_rational.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace kbdecay {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of the shortest decimal string that round-trips `value`,
/// e.g. 0.144 -> 18/125 (not the binary expansion of the double).
/// Throws NonRationalCoefficient for NaN or infinity.
Rational rational_from_double(double value);

/// Parses "p/q", "p", or a decimal literal such as "-0.0244993" or "1e-3".
/// Throws InvalidParameter on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational &value);

double to_double(const Rational &value);

/// Exact square root when numerator and denominator are both perfect squares.
std::optional<Rational> exact_sqrt(const Rational &value);

} // namespace kbdecay
