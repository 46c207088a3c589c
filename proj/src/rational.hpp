#ifndef MHFA_RATIONAL_HPP
#define MHFA_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace mhfa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders a rational as "num/den" in lowest terms, e.g. "9/16", "0/1", "1/1".
std::string fraction_string(const Rational& r);

/// Renders with an approximate decimal column appended, e.g. "9/16 (~0.562500)".
std::string fraction_string_approx(const Rational& r);

/// Parses "a/b" or a bare integer "a". Returns nullopt on malformed input
/// or a zero denominator.
std::optional<Rational> parse_fraction(const std::string& text);

Rational rational_pow(const Rational& base, unsigned exponent);

/// True when r = a / 2^b for integers a, b >= 0. On success *bits is the
/// minimum number of fractional binary digits (0 for integers).
bool is_dyadic(const Rational& r, int* bits = nullptr);

}  // namespace mhfa

#endif
