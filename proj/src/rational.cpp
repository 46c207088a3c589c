#include "rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <sstream>

namespace mhfa {

std::string fraction_string(const Rational& r) {
  std::ostringstream out;
  out << numerator(r) << "/" << denominator(r);
  return out.str();
}

std::string fraction_string_approx(const Rational& r) {
  using Float = boost::multiprecision::cpp_bin_float_double;
  std::ostringstream out;
  out << fraction_string(r) << " (~" << std::fixed
      << static_cast<double>(Float(numerator(r)) / Float(denominator(r))) << ")";
  return out.str();
}

std::optional<Rational> parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1u;
  }
  return result;
}

bool is_dyadic(const Rational& r, int* bits) {
  BigInt den = denominator(r);
  int b = 0;
  while (den > 1) {
    if (den % 2 != 0) return false;
    den /= 2;
    ++b;
  }
  if (bits != nullptr) *bits = b;
  return true;
}

}  // namespace mhfa
