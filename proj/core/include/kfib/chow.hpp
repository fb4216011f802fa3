#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/rational.hpp"

namespace kfib {

// Thrown by intersect when the number of classes differs from the dimension.
struct WrongArity : std::runtime_error {
  explicit WrongArity(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a projectivised bundle is requested with no summands.
struct EmptyBundle : std::runtime_error {
  explicit EmptyBundle(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a blowup centre description is outside the supported shapes.
struct UnsupportedCenter : std::runtime_error {
  explicit UnsupportedCenter(const std::string& what) : std::runtime_error(what) {}
};

// A divisor class: a formal rational combination of named ring generators.
// Zero coefficients are never stored.
class DivisorClass {
 public:
  DivisorClass() = default;
  DivisorClass(const std::string& generator, Rational coeff);

  static DivisorClass zero() { return {}; }

  Rational coefficient(const std::string& generator) const;
  bool is_zero() const { return c_.empty(); }

  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator-(const DivisorClass& o) const;
  DivisorClass operator-() const;
  DivisorClass operator*(const Rational& s) const;
  DivisorClass& operator+=(const DivisorClass& o) { return *this = *this + o; }
  DivisorClass& operator-=(const DivisorClass& o) { return *this = *this - o; }
  bool operator==(const DivisorClass& o) const { return c_ == o.c_; }

  const std::map<std::string, Rational>& terms() const { return c_; }

  std::string str() const;

 private:
  std::map<std::string, Rational> c_;
};

inline DivisorClass operator*(const Rational& s, const DivisorClass& d) { return d * s; }

class ChowModel;
using ModelPtr = std::shared_ptr<const ChowModel>;

// Description of a blowup centre: a transverse complete intersection
// Z = V(cut_1) ∩ … ∩ V(cut_r) inside the ambient model, together with a
// model of Z itself and the restriction of every ambient generator to Z.
struct BlowupCentre {
  std::vector<DivisorClass> cuts;
  ModelPtr centre_model;
  std::map<std::string, DivisorClass> restriction;
};

// All intersection numbers of a model in one table: every monomial of total
// degree = dimension in the listed generators, mapped to its degree.
struct IntersectionProfile {
  int dimension = 0;
  std::vector<std::string> generators;
  std::map<std::vector<int>, Rational> numbers;

  Rational number(const std::vector<int>& exponents) const;
};

// A smooth projective variety presented as (a product of projective spaces)
// optionally followed by a projectivised split vector bundle, optionally
// followed by one blowup along a transverse complete-intersection centre.
// Carries exactly enough structure to evaluate intersection numbers of
// divisor-class products exactly.
class ChowModel {
 public:
  struct Factor {
    std::string name;  // hyperplane-class generator
    int dim = 0;
  };

  struct Bundle {
    std::string name;  // relative hyperplane class (first Chern of O(1))
    std::vector<DivisorClass> summands;  // first Chern classes on the base factors
    ModelPtr base;
  };

  struct Blowup {
    std::string name;  // exceptional divisor class
    BlowupCentre centre;
    ModelPtr ambient;
  };

  int dimension() const { return dimension_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::optional<Bundle>& bundle() const { return bundle_; }
  const std::optional<Blowup>& blowup() const { return blowup_; }
  std::vector<std::string> generator_names() const;

  // Canonical class of the total space.
  DivisorClass canonical() const { return canonical_; }
  // For bundle models: canonical class relative to the base product.
  DivisorClass relative_canonical() const { return relative_canonical_; }

  DivisorClass generator(const std::string& name) const;
  bool has_generator(const std::string& name) const;

  friend ModelPtr build_projective_product(const std::vector<int>& dims,
                                           const std::vector<std::string>& names);
  friend ModelPtr build_projective_bundle(const ModelPtr& base,
                                          const std::vector<DivisorClass>& summands,
                                          const std::string& name);
  friend ModelPtr build_blowup(const ModelPtr& ambient, const BlowupCentre& centre,
                               const std::string& name);
  friend Rational intersect(const ChowModel& model, const std::vector<DivisorClass>& classes);

 private:
  ChowModel() = default;

  int dimension_ = 0;
  std::vector<Factor> factors_;
  std::optional<Bundle> bundle_;
  std::optional<Blowup> blowup_;
  DivisorClass canonical_;
  DivisorClass relative_canonical_;
};

// Product of projective spaces of the given dimensions. Generator names
// default to h1, h2, …; pass explicit names to override (one per factor).
ModelPtr build_projective_product(const std::vector<int>& dims,
                                  const std::vector<std::string>& names = {});

// Projectivisation (space of one-dimensional quotients) of a direct sum of
// line bundles on a product-of-projective-spaces model. Sections of the
// relative hyperplane bundle push forward to the bundle itself, so for
// summand classes l_1 … l_r the defining relation is
//   xi^r = e_1 xi^{r-1} - e_2 xi^{r-2} + …   (e_i elementary symmetric in l_i),
// equivalently: the pushforward of xi^{r-1+s} is the complete homogeneous
// symmetric polynomial h_s(l_1..l_r).
ModelPtr build_projective_bundle(const ModelPtr& base,
                                 const std::vector<DivisorClass>& summands,
                                 const std::string& name = "xi");

// Blowup of the ambient model along the described centre. The exceptional
// class e satisfies: deg(pullback(b) · e^a) = (-1)^{r+1} deg_Z(b|_Z · h_{a-r})
// where h_s is the complete homogeneous symmetric polynomial in the
// restricted cut classes, and K = pullback(K_ambient) + (r-1) e.
ModelPtr build_blowup(const ModelPtr& ambient, const BlowupCentre& centre,
                      const std::string& name = "e");

// Exact degree of a product of `dimension` divisor classes.
Rational intersect(const ChowModel& model, const std::vector<DivisorClass>& classes);

// Convenience: product with multiplicities, e.g. {{A,2},{B,1}} for A·A·B.
Rational intersect_powers(const ChowModel& model,
                          const std::vector<std::pair<DivisorClass, int>>& powers);

// Tabulate every top-degree monomial in the model's generators.
IntersectionProfile to_profile(const ChowModel& model);

}  // namespace kfib
