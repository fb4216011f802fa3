#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfib/models.hpp"

using namespace kfib;

namespace {

DivisorClass cls(const std::string& name, long coeff = 1) {
  return DivisorClass(name, Rational(coeff));
}

SplitBundle line_bundle_pair(long d0, long d1) {
  const ModelPtr base = build_projective_product({1});
  return make_split_bundle(base, {{Rational(d0)}, {Rational(d1)}});
}

PolarisedFibration line_fibration(long d0, long d1) {
  return make_projectivised_fibration(line_bundle_pair(d0, d1), cls("h1"));
}

}  // namespace

TEST_CASE("split bundle construction and validation") {
  const SplitBundle bundle = line_bundle_pair(0, -1);
  CHECK(bundle.rank() == 2);
  CHECK(bundle.first_chern() == cls("h1", -1));

  const ModelPtr base = build_projective_product({1});
  CHECK_THROWS_AS(make_split_bundle(base, {}), EmptyBundle);
  CHECK_THROWS_AS(make_split_bundle(base, {{Rational(0), Rational(1)}}),
                  DimensionMismatch);
}

TEST_CASE("sheaf slopes over the line") {
  const SplitBundle bundle = line_bundle_pair(0, -1);
  const DivisorClass L = cls("h1");
  CHECK(slope_sheaf(bundle, L) == Rational(-1, 2));
  CHECK(slope_sheaf(bundle, {0}, L) == 0);
  CHECK(slope_sheaf(bundle, {1}, L) == -1);
  CHECK(slope_sheaf(bundle, {0, 1}, L) == Rational(-1, 2));
  CHECK_THROWS_AS(slope_sheaf(bundle, std::vector<int>{}, L), TrivialSubsheaf);
}

TEST_CASE("projectivised fibration invariants") {
  const PolarisedFibration fib = line_fibration(0, -1);
  CHECK(fib.n == 1);
  CHECK(fib.m == 1);
  CHECK(fib.total->dimension() == 2);
  CHECK(fib.H == cls("xi"));
  CHECK(fib.K_rel == cls("xi", -2) + cls("h1", -1));
  CHECK(fib.K == cls("xi", -2) + cls("h1", -3));
  CHECK(fib.L == cls("h1"));

  CHECK_THROWS_AS(make_projectivised_fibration(line_bundle_pair(0, 0), cls("h1"), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_projectivised_fibration(line_bundle_pair(0, 0), cls("xi")),
                  DimensionMismatch);
}

TEST_CASE("weight degenerations extend the base by a line") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  CHECK(degen.total_model->dimension() == 3);
  CHECK(degen.weights == std::vector<long>{1, 0});
  CHECK_FALSE(degen.Hpull.has_value());  // non-constant weights twist the class
  CHECK(degen.Lcal == cls("h1"));

  const FibrationDegeneration constant = make_weight_degeneration(fib, {2, 2});
  CHECK(constant.Hpull.has_value());

  CHECK_THROWS_AS(make_weight_degeneration(fib, {1}), WrongArity);
}

TEST_CASE("subsheaf degenerations carry indicator weights") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const FibrationDegeneration degen = make_subsheaf_degeneration(fib, {0});
  CHECK(degen.subsheaf == std::vector<int>{0});
  CHECK(degen.weights == std::vector<long>{1, 0});

  const FibrationDegeneration dedup = make_subsheaf_degeneration(fib, {1, 1});
  CHECK(dedup.subsheaf == std::vector<int>{1});
  CHECK(dedup.weights == std::vector<long>{0, 1});

  CHECK_THROWS_AS(make_subsheaf_degeneration(fib, {}), TrivialSubsheaf);
  CHECK_THROWS_AS(make_subsheaf_degeneration(fib, {0, 1}), TrivialSubsheaf);
}

TEST_CASE("trivial degeneration") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const FibrationDegeneration trivial = make_trivial_degeneration(fib);
  CHECK(trivial.is_trivial);
  CHECK(trivial.weights == std::vector<long>(2, 0));
  CHECK(trivial.Hpull.has_value());
}

TEST_CASE("all sub-direct-sums enumerated in mask order") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const auto degens2 = all_subsheaf_degenerations(fib);
  REQUIRE(degens2.size() == 2);
  CHECK(degens2[0].subsheaf == std::vector<int>{0});
  CHECK(degens2[1].subsheaf == std::vector<int>{1});

  const ModelPtr base = build_projective_product({1});
  const SplitBundle rank3 =
      make_split_bundle(base, {{Rational(0)}, {Rational(1)}, {Rational(-1)}});
  const PolarisedFibration fib3 = make_projectivised_fibration(rank3, cls("h1"));
  CHECK(all_subsheaf_degenerations(fib3).size() == 6);

  const SplitBundle rank1 = make_split_bundle(base, {{Rational(3)}});
  const PolarisedFibration fib1 = make_projectivised_fibration(rank1, cls("h1"));
  CHECK(all_subsheaf_degenerations(fib1).empty());
}

TEST_CASE("fibre family of a degeneration") {
  const PolarisedFibration fib = line_fibration(0, -1);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  const TestConfiguration tc = make_fibre_test_configuration(degen);
  CHECK(tc.model->dimension() == 2);  // fibre dimension 1, plus the line
  CHECK(tc.weights == std::vector<long>{1, 0});
  CHECK_FALSE(tc.original_pullback.has_value());

  const TestConfiguration trivial_tc =
      make_fibre_test_configuration(make_trivial_degeneration(fib));
  CHECK(trivial_tc.original_pullback.has_value());
}

TEST_CASE("point normal-cone and resolved product families") {
  const TestConfiguration nc = make_point_normal_cone_tc(2);
  CHECK(nc.model->dimension() == 2);
  CHECK(nc.original_pullback.has_value());

  const TestConfiguration rp = make_resolved_product_tc();
  CHECK(rp.model->dimension() == 2);
  CHECK(rp.original_pullback.has_value());
  CHECK(rp.weights == std::vector<long>{1, 0});
}

TEST_CASE("rank-2 degenerations resolve to a blowup model") {
  const PolarisedFibration fib = line_fibration(0, 0);
  const FibrationDegeneration degen = make_weight_degeneration(fib, {1, 0});
  const ResolvedDegenerationModel resolved = resolve_rank2_degeneration(degen);
  CHECK(resolved.model->dimension() == 3);

  const FibrationDegeneration swapped = make_weight_degeneration(fib, {0, 1});
  CHECK(resolve_rank2_degeneration(swapped).model->dimension() == 3);

  CHECK_THROWS_AS(resolve_rank2_degeneration(make_weight_degeneration(fib, {2, 1})),
                  UnsupportedCenter);

  const ModelPtr base = build_projective_product({1});
  const SplitBundle rank3 =
      make_split_bundle(base, {{Rational(0)}, {Rational(0)}, {Rational(0)}});
  const PolarisedFibration fib3 = make_projectivised_fibration(rank3, cls("h1"));
  CHECK_THROWS_AS(resolve_rank2_degeneration(make_weight_degeneration(fib3, {1, 0, 0})),
                  NotBundleType);
}
