#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace kfib {

// Exact arbitrary-precision arithmetic. Rationals are kept normalized
// (lowest terms, positive denominator) by the underlying representation,
// so operator== is genuine equality of numbers. The two-component
// constructor requires a positive denominator; divide to build a quotient
// with arbitrary signs. Expression templates are disabled so every
// arithmetic expression has the value type itself.
using Integer =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer factorial(unsigned n) {
  Integer out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

// Counting binomial: zero outside the triangle.
inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Integer out = 1;
  for (long i = 1; i <= k; ++i) {
    out *= (n - k + i);
    out /= i;
  }
  return out;
}

// Euler characteristic of O(deg) on projective space of the given dimension,
// as the polynomial value prod_{i=1..dim} (deg + i) / dim!. Valid for every
// integer deg (negative included), unlike the section count.
inline Rational chi_projective_line_bundle(unsigned dim, const Integer& deg) {
  Rational out = 1;
  for (unsigned i = 1; i <= dim; ++i) out *= Rational(deg + i);
  return out / Rational(factorial(dim));
}

// Section count of O(deg) on projective space: binom(deg + dim, dim), zero
// for negative degree.
inline Integer sections_projective_line_bundle(unsigned dim, long deg) {
  if (deg < 0) return 0;
  return binomial(deg + static_cast<long>(dim), static_cast<long>(dim));
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational rational_from_string(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  }
}

}  // namespace kfib
