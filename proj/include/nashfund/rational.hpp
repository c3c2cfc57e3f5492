#pragma once

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "nashfund/error.hpp"

namespace nashfund {

using Rational = boost::multiprecision::cpp_rational;

/**
 * Best rational approximation of `value` with denominator at most
 * `max_denominator`, from the continued-fraction convergents and the last
 * admissible semiconvergent. Intended for turning floating-point inputs into
 * exact values for the oracles; it is not a general-purpose conversion.
 */
inline Rational rationalize(double value, std::int64_t max_denominator = 1'000'000'000) {
  using boost::multiprecision::cpp_int;
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidValue, "cannot rationalize a non-finite value");
  }
  const bool negative = value < 0.0;
  // Exact binary value of the double as a rational.
  Rational exact(std::abs(value));

  cpp_int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = exact;
  const cpp_int bound = max_denominator;
  while (true) {
    const cpp_int a = boost::multiprecision::numerator(rest) /
                      boost::multiprecision::denominator(rest);
    const cpp_int q2 = q0 + a * q1;
    if (q2 > bound) {
      // Largest semiconvergent k with q0 + k*q1 <= bound, if it beats p1/q1.
      const cpp_int k = (bound - q0) / q1;
      const Rational semi(p0 + k * p1, q0 + k * q1);
      const Rational conv(p1, q1);
      const Rational best = abs(semi - exact) < abs(conv - exact) ? semi : conv;
      return negative ? Rational(-best) : best;
    }
    const cpp_int p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
  }
  const Rational result(p1, q1);
  return negative ? Rational(-result) : result;
}

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace nashfund
