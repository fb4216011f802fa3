#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfib/oracle.hpp"

using namespace kfib;

namespace {

DivisorClass cls(const std::string& name, long coeff = 1) {
  return DivisorClass(name, Rational(coeff));
}

PolarisedFibration line_fibration(long d0, long d1) {
  const ModelPtr base = build_projective_product({1});
  const SplitBundle bundle =
      make_split_bundle(base, {{Rational(d0)}, {Rational(d1)}});
  return make_projectivised_fibration(bundle, cls("h1"));
}

}  // namespace

TEST_CASE("section counts on the trivial rank-2 bundle") {
  // Sections of k(jL + xi) on P(O+O) over the line: (k+1)(kj+1).
  const PolarisedFibration fib = line_fibration(0, 0);
  CHECK(hilbert_count(fib, 1, 3) == 16);
  CHECK(hilbert_count(fib, 2, 2) == 15);
  CHECK(hilbert_count(fib, 1, 0) == 1);
}

TEST_CASE("section counts see negative twists") {
  // O + O(-3): for j < 3 the twisted factor contributes nothing on some
  // monomials; closed form at j = 3, k = 1: a0 degree 3+0, a1 degree 0.
  const PolarisedFibration fib = line_fibration(0, -3);
  CHECK(validity_threshold(fib) == 3);
  CHECK(hilbert_count(fib, 3, 1) == 5);  // degrees 3 and 0 give 4 + 1 sections
}

TEST_CASE("weight spectrum of a single-summand scaling") {
  const PolarisedFibration fib = line_fibration(0, 0);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  const WeightSpectrum spectrum = weight_spectrum(degen, 1, 2);
  CHECK(spectrum.total_multiplicity() == 9);
  CHECK(spectrum.total_weight() == 9);
  CHECK(spectrum.max_weight() == 2);
  CHECK(spectrum.min_weight() == 0);
  REQUIRE(spectrum.multiplicities.size() == 3);
  CHECK(spectrum.multiplicities.at(0) == 3);
  CHECK(spectrum.multiplicities.at(1) == 3);
  CHECK(spectrum.multiplicities.at(2) == 3);

  CHECK(weight_polynomial(degen, 1, 2) == 9);
}

TEST_CASE("euler characteristic route matches enumeration") {
  const PolarisedFibration fib = line_fibration(0, 0);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  for (long j = 1; j <= 3; ++j)
    for (long k = 1; k <= 4; ++k) {
      const Rational chi = family_euler_characteristic(degen, j, k);
      const Rational counted = Rational(hilbert_count(fib, j, k)) +
                               Rational(weight_polynomial(degen, j, k));
      CHECK(chi == counted);
    }
}

TEST_CASE("default grid sizes and bounds") {
  const PolarisedFibration fib = line_fibration(0, -1);
  FitOptions options;
  const EnumerationGrid grid = default_grid(fib, options);
  CHECK(grid.j_values.size() == 4);   // n + 3
  CHECK(grid.k_values.size() == 6);   // n + m + 4
  CHECK(grid.j_values.front() >= validity_threshold(fib));
  CHECK(grid.k_values.front() >= 1);
  CHECK(grid.k_values.back() <= options.max_k);

  FitOptions tight;
  tight.max_k = 5;  // cannot host n + m + 4 = 6 distinct k values
  CHECK_THROWS_AS(default_grid(fib, tight), std::invalid_argument);

  FitOptions invalid;
  invalid.j_values = std::vector<long>{0, 1, 2, 3};  // below the threshold
  CHECK_THROWS_AS(default_grid(line_fibration(0, -1), invalid), std::invalid_argument);
}

TEST_CASE("fitted tables reproduce the closed forms on the trivial bundle") {
  const PolarisedFibration fib = line_fibration(0, 0);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  const FittedCounts fits = fit_h_and_w(degen, {});

  BivariatePolynomial h_expected;  // (k+1)(kj+1)
  h_expected.add_term(1, 2, Rational(1));
  h_expected.add_term(1, 1, Rational(1));
  h_expected.add_term(0, 1, Rational(1));
  h_expected.add_term(0, 0, Rational(1));
  CHECK(fits.h.terms() == h_expected.terms());

  BivariatePolynomial w_expected;  // (kj+1) k(k+1)/2
  w_expected.add_term(1, 3, Rational(1, 2));
  w_expected.add_term(1, 2, Rational(1, 2));
  w_expected.add_term(0, 2, Rational(1, 2));
  w_expected.add_term(0, 1, Rational(1, 2));
  CHECK(fits.w.terms() == w_expected.terms());

  CHECK(fits.h.degree_k() == 2);  // n + m
  CHECK(fits.w.degree_k() == 3);  // n + m + 1
  CHECK(fits.h.degree_j() == 1);
  CHECK(fits.w.degree_j() <= 1);

  CHECK_NOTHROW(verify_euler_characteristic_identity(degen, fits.grid));
}

TEST_CASE("fits respect explicit grids and degree checks") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const FibrationDegeneration degen = make_subsheaf_degeneration(fib, {0});
  FitOptions options;
  options.j_values = std::vector<long>{2, 3, 4, 5};
  options.k_values = std::vector<long>{1, 2, 3, 4, 5, 6};
  const FittedCounts fits = fit_h_and_w(degen, options);
  CHECK(fits.grid.j_values == *options.j_values);
  CHECK(fits.h.degree_k() == 2);
  CHECK(fits.w.degree_k() == 3);
}

TEST_CASE("non-integer polarization data is rejected during enumeration") {
  const ModelPtr base = build_projective_product({1});
  const SplitBundle bundle = make_split_bundle(base, {{Rational(0)}, {Rational(0)}});
  const PolarisedFibration fib =
      make_projectivised_fibration(bundle, cls("h1") * Rational(1, 2));
  CHECK_THROWS_AS(hilbert_count(fib, 1, 2), NegativeTwist);
}

TEST_CASE("fibre family asymptotics") {
  const PolarisedFibration fib = line_fibration(0, 0);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  const TestConfiguration tc = make_fibre_test_configuration(degen);

  const Poly h = fibre_hilbert_poly(tc);  // k + 1 on the line fibre
  CHECK(h.degree() == 1);
  CHECK(h.coefficient(1) == 1);
  CHECK(h.coefficient(0) == 1);

  const Poly w = fibre_weight_poly(tc);  // k(k+1)/2
  CHECK(w.degree() == 2);
  CHECK(w.coefficient(2) == Rational(1, 2));
  CHECK(w.coefficient(1) == Rational(1, 2));

  const WeightSpectrum spectrum = fibre_weight_spectrum(tc, 3);
  CHECK(spectrum.total_multiplicity() == 4);
  CHECK(spectrum.total_weight() == 6);
  CHECK(spectrum.max_weight() == 3);
}

TEST_CASE("surface families expose both counting routes") {
  const TestConfiguration nc = make_point_normal_cone_tc(2);
  const Poly h = tc_hilbert_poly_from_model(nc);  // 2k + 1
  CHECK(h.degree() == 1);
  CHECK(h.coefficient(1) == 2);
  CHECK(h.coefficient(0) == 1);

  const Poly w = tc_weight_poly_via_chi(nc);  // -(k^2 + k)/2
  CHECK(w.degree() == 2);
  CHECK(w.coefficient(2) == Rational(-1, 2));
  CHECK(w.coefficient(1) == Rational(-1, 2));
}
