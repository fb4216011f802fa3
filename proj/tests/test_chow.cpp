#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kfib/chow.hpp"
#include "kfib/models.hpp"

using namespace kfib;

namespace {

DivisorClass cls(const std::string& name, long coeff = 1) {
  return DivisorClass(name, Rational(coeff));
}

}  // namespace

TEST_CASE("divisor class arithmetic drops zero terms") {
  DivisorClass a = cls("h", 2) + cls("e", -1);
  DivisorClass b = cls("e", 1);
  CHECK(a + b == cls("h", 2));
  CHECK((a - a) == DivisorClass::zero());
  CHECK(a * Rational(0) == DivisorClass::zero());
  CHECK(Rational(2) * cls("h") == cls("h", 2));
}

TEST_CASE("products of projective spaces") {
  const ModelPtr line = build_projective_product({1});
  CHECK(line->dimension() == 1);
  CHECK(intersect(*line, {cls("h1")}) == 1);
  CHECK(intersect(*line, {line->canonical()}) == -2);

  const ModelPtr plane = build_projective_product({2});
  CHECK(intersect(*plane, {cls("h1"), cls("h1")}) == 1);
  CHECK(intersect(*plane, {plane->canonical(), cls("h1")}) == -3);

  const ModelPtr quadric = build_projective_product({1, 1});
  CHECK(intersect(*quadric, {cls("h1"), cls("h2")}) == 1);
  CHECK(intersect(*quadric, {cls("h1"), cls("h1")}) == 0);
  CHECK(intersect(*quadric, {cls("h2"), cls("h2")}) == 0);
  // (-K)^2 = 8 on the quadric surface.
  const DivisorClass antik = quadric->canonical() * Rational(-1);
  CHECK(intersect(*quadric, {antik, antik}) == 8);
}

TEST_CASE("intersection requires as many classes as the dimension") {
  const ModelPtr plane = build_projective_product({2});
  CHECK_THROWS_AS(intersect(*plane, {cls("h1")}), WrongArity);
  CHECK_THROWS_AS(intersect(*plane, {cls("h1"), cls("h1"), cls("h1")}), WrongArity);
}

TEST_CASE("tautological class on projectivised bundles") {
  const ModelPtr line = build_projective_product({1});

  // P(O + O(1)): xi^2 = 1.
  const ModelPtr plus = build_projective_bundle(line, {DivisorClass(), cls("h1")});
  CHECK(plus->dimension() == 2);
  CHECK(intersect_powers(*plus, {{cls("xi"), 2}}) == 1);
  CHECK(intersect(*plus, {cls("xi"), cls("h1")}) == 1);
  CHECK(intersect(*plus, {cls("h1"), cls("h1")}) == 0);

  // P(O + O(-1)): xi^2 = -1; both surfaces have K^2 = 8.
  const ModelPtr minus = build_projective_bundle(line, {DivisorClass(), cls("h1", -1)});
  CHECK(intersect_powers(*minus, {{cls("xi"), 2}}) == -1);
  CHECK(intersect_powers(*plus, {{plus->canonical(), 2}}) == 8);
  CHECK(intersect_powers(*minus, {{minus->canonical(), 2}}) == 8);

  // Rank 3 with summands O, O, O(-1): xi^3 = -1.
  const ModelPtr rank3 =
      build_projective_bundle(line, {DivisorClass(), DivisorClass(), cls("h1", -1)});
  CHECK(rank3->dimension() == 3);
  CHECK(intersect_powers(*rank3, {{cls("xi"), 3}}) == -1);
  CHECK(intersect_powers(*rank3, {{cls("xi"), 2}, {cls("h1"), 1}}) == 1);

  // Trivial rank 3: xi^3 = 0.
  const ModelPtr trivial =
      build_projective_bundle(line, {DivisorClass(), DivisorClass(), DivisorClass()});
  CHECK(intersect_powers(*trivial, {{cls("xi"), 3}}) == 0);
}

TEST_CASE("relative canonical of a projectivised bundle") {
  const ModelPtr line = build_projective_product({1});
  const ModelPtr minus = build_projective_bundle(line, {DivisorClass(), cls("h1", -1)});
  CHECK(minus->relative_canonical() == cls("xi", -2) + cls("h1", -1));
  CHECK(minus->canonical() == cls("xi", -2) + cls("h1", -3));
}

TEST_CASE("blowup of a point in the plane") {
  const ModelPtr plane = build_projective_product({2});
  const ModelPtr point = build_projective_product({0}, {"pt"});
  BlowupCentre centre;
  centre.cuts = {cls("h1"), cls("h1")};
  centre.centre_model = point;
  centre.restriction = {{"h1", DivisorClass()}};
  const ModelPtr blown = build_blowup(plane, centre);
  CHECK(blown->dimension() == 2);
  CHECK(intersect_powers(*blown, {{cls("e"), 2}}) == -1);
  CHECK(intersect(*blown, {cls("h1"), cls("e")}) == 0);
  CHECK(intersect(*blown, {cls("h1"), cls("h1")}) == 1);
  // K = -3h + e, so (-K)^2 = 9 - 1 = 8.
  const DivisorClass antik = blown->canonical() * Rational(-1);
  CHECK(antik == cls("h1", 3) + cls("e", -1));
  CHECK(intersect_powers(*blown, {{antik, 2}}) == 8);
}

TEST_CASE("blowup of a line in three-space") {
  const ModelPtr space = build_projective_product({3});
  const ModelPtr centre_line = build_projective_product({1}, {"c"});
  BlowupCentre centre;
  centre.cuts = {cls("h1"), cls("h1")};
  centre.centre_model = centre_line;
  centre.restriction = {{"h1", cls("c")}};
  const ModelPtr blown = build_blowup(space, centre);
  CHECK(blown->dimension() == 3);

  CHECK(intersect_powers(*blown, {{cls("h1"), 2}, {cls("e"), 1}}) == 0);
  CHECK(intersect_powers(*blown, {{cls("h1"), 1}, {cls("e"), 2}}) == -1);
  CHECK(intersect_powers(*blown, {{cls("e"), 3}}) == -2);
  // K = -4h + e, so (-K)^3 = 64 - 12(h.e^2) missing signs spelled out: 54.
  const DivisorClass antik = blown->canonical() * Rational(-1);
  CHECK(intersect_powers(*blown, {{antik, 3}}) == 54);
}

TEST_CASE("blowup used by the point normal-cone family") {
  const TestConfiguration tc = make_point_normal_cone_tc(2);
  const ChowModel& model = *tc.model;
  CHECK(model.dimension() == 2);
  CHECK(intersect_powers(model, {{cls("e"), 2}}) == -1);
  CHECK(intersect(model, {cls("e"), cls("t")}) == 0);
  CHECK(intersect(model, {tc.polarization, tc.polarization}) == -1);
  CHECK(intersect(model, {tc.polarization, *tc.original_pullback}) == 0);
}

TEST_CASE("intersection profile enumerates all top products") {
  const ModelPtr quadric = build_projective_product({1, 1});
  const IntersectionProfile profile = to_profile(*quadric);
  CHECK(profile.dimension == 2);
  REQUIRE(profile.generators == std::vector<std::string>{"h1", "h2"});
  CHECK(profile.number({1, 1}) == 1);
  CHECK(profile.number({2, 0}) == 0);
  CHECK(profile.number({0, 2}) == 0);
}

TEST_CASE("builder validation") {
  CHECK_THROWS_AS(build_projective_product({}), std::invalid_argument);
  CHECK_THROWS_AS(build_projective_product({-1}), std::invalid_argument);
  CHECK_THROWS_AS(build_projective_product({1, 1}, {"h", "h"}), std::invalid_argument);
  const ModelPtr line = build_projective_product({1});
  CHECK_THROWS_AS(build_projective_bundle(line, {}), EmptyBundle);
}
