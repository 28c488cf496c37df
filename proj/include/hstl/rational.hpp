#pragma once

// Exact arithmetic for robustness values and predicate coefficients.

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hstl {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

// Renders integers bare ("7", "-3") and everything else as "num/den".
inline std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "12", "-3", "0.25", "7/2". Decimal digits are converted exactly
// (denominator a power of ten), so formatting and parsing round-trip.
Rational parse_rational(const std::string& text);

}  // namespace hstl
