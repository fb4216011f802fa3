#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfib/rational.hpp"

using namespace kfib;

TEST_CASE("factorial small values") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(1) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(12) == 479001600);
}

TEST_CASE("binomial coefficients count subsets") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(6, 0) == 1);
  CHECK(binomial(6, 6) == 1);
  CHECK(binomial(3, 1) == 3);
  CHECK(binomial(10, 5) == 252);
}

TEST_CASE("binomial vanishes outside the triangle") {
  CHECK(binomial(2, 5) == 0);
  CHECK(binomial(2, -1) == 0);
  CHECK(binomial(-1, 0) == 0);
}

TEST_CASE("euler characteristic of line bundles on projective space") {
  // Line: chi(O(d)) = d + 1 for every integer d.
  CHECK(chi_projective_line_bundle(1, Integer(3)) == 4);
  CHECK(chi_projective_line_bundle(1, Integer(-3)) == -2);
  // Plane: chi(O(d)) = (d+1)(d+2)/2; zero on d = -1, -2, one at d = -3.
  CHECK(chi_projective_line_bundle(2, Integer(2)) == 6);
  CHECK(chi_projective_line_bundle(2, Integer(-1)) == 0);
  CHECK(chi_projective_line_bundle(2, Integer(-2)) == 0);
  CHECK(chi_projective_line_bundle(2, Integer(-3)) == 1);
  // Three-space sanity value.
  CHECK(chi_projective_line_bundle(3, Integer(1)) == 4);
}

TEST_CASE("section counts truncate at zero") {
  CHECK(sections_projective_line_bundle(2, 2) == 6);
  CHECK(sections_projective_line_bundle(2, 0) == 1);
  CHECK(sections_projective_line_bundle(2, -1) == 0);
  CHECK(sections_projective_line_bundle(1, -5) == 0);
}

TEST_CASE("rational accessors and parsing round-trip") {
  const Rational r(3, 6);
  CHECK(numerator(r) == 1);
  CHECK(denominator(r) == 2);
  CHECK(to_string(r) == "1/2");
  CHECK(to_string(Rational(-4)) == "-4");
  CHECK(rational_from_string("-7/3") == Rational(-7, 3));
  // Division normalizes the sign onto the numerator.
  const Rational negative = Rational(22) / Rational(-8);
  CHECK(numerator(negative) == -11);
  CHECK(denominator(negative) == 4);
  CHECK(rational_from_string(to_string(negative)) == Rational(-11, 4));
  CHECK_THROWS_AS(rational_from_string("one half"), std::invalid_argument);
}
