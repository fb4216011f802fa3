#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/chow.hpp"

namespace kfib {

// Thrown when a sub-direct-sum is empty or everything (no actual degeneration).
struct TrivialSubsheaf : std::runtime_error {
  explicit TrivialSubsheaf(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation needs a bundle-type (product central fibre)
// degeneration but was handed something else.
struct NotBundleType : std::runtime_error {
  explicit NotBundleType(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when classes live on the wrong model or have the wrong dimension
// profile for the requested construction.
struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A direct sum of line bundles on a product of projective spaces.
struct SplitBundle {
  ModelPtr base;
  std::vector<DivisorClass> summands;  // first Chern classes on the base

  int rank() const { return static_cast<int>(summands.size()); }
  DivisorClass first_chern() const;
};

// Build a split bundle from per-factor degree vectors, one vector per summand
// (entry f = degree along base factor f).
SplitBundle make_split_bundle(const ModelPtr& base,
                              const std::vector<std::vector<Rational>>& degrees);

// Slope with respect to L: (c1 · L^{n-1}) / rank, over the whole sum or a
// subset of summand indices.
Rational slope_sheaf(const SplitBundle& bundle, const DivisorClass& L);
Rational slope_sheaf(const SplitBundle& bundle, const std::vector<int>& subset,
                     const DivisorClass& L);

// X = P(bundle) fibred over the base, polarised by L (pulled back) with a
// relatively ample H = H_xi * xi + H_base.
struct PolarisedFibration {
  SplitBundle bundle;
  ModelPtr total;      // model of X, dimension n + m
  int n = 0;           // base dimension
  int m = 0;           // fibre dimension (rank - 1)
  DivisorClass L;      // base polarization, pulled back
  DivisorClass H;      // relatively ample class
  int H_xi = 1;
  DivisorClass H_base;
  DivisorClass K;      // canonical class of X
  DivisorClass K_rel;  // canonical of X relative to the base
};

PolarisedFibration make_projectivised_fibration(const SplitBundle& bundle,
                                               const DivisorClass& L_base, int H_xi = 1,
                                               const DivisorClass& H_base = {});

// One-parameter flat degeneration of X induced by scaling a sub-direct-sum,
// compactified over the line: the bundle over base × line whose summands are
// twisted by their weights. Carries every class the invariants need.
struct FibrationDegeneration {
  PolarisedFibration parent;
  ModelPtr total_model;                   // dimension n + m + 1
  DivisorClass Hcal;                      // restricts to H on general fibres
  DivisorClass Lcal;                      // pullback of L
  std::optional<DivisorClass> Hpull;      // pullback of H itself, when representable
  DivisorClass K_rel_line;                // canonical relative to the line
  DivisorClass K_rel_base_line;           // canonical relative to base × line
  DivisorClass central_slice;             // class of the fibre over a point of the line
  std::vector<long> weights;              // per-summand scaling weights
  std::optional<std::vector<int>> subsheaf;  // summand indices, when built from one
  bool is_trivial = false;
};

// Degeneration from an arbitrary per-summand weight vector.
FibrationDegeneration make_weight_degeneration(const PolarisedFibration& fibration,
                                               const std::vector<long>& weights);

// Degeneration attached to a proper nonempty sub-direct-sum: its summands get
// weight one, the rest zero.
FibrationDegeneration make_subsheaf_degeneration(const PolarisedFibration& fibration,
                                                 const std::vector<int>& subsheaf);

// The product family X × line (all weights zero).
FibrationDegeneration make_trivial_degeneration(const PolarisedFibration& fibration);

// Every proper nonempty sub-direct-sum, in deterministic order.
std::vector<FibrationDegeneration> all_subsheaf_degenerations(
    const PolarisedFibration& fibration);

// A polarised one-parameter family of a single fibre-type variety over the
// line: the object the two degeneration-invariant routes are compared on.
struct TestConfiguration {
  ModelPtr model;                    // compactified total space, dimension q + 1
  DivisorClass polarization;         // relatively ample over the line
  DivisorClass K_rel_line;           // canonical relative to the line
  DivisorClass fibre_slice;          // class of a general fibre of the family
  std::optional<DivisorClass> original_pullback;  // pullback of the general-fibre
                                                  // polarization, when representable
  std::optional<std::vector<long>> weights;       // product-type scaling actions
};

// Restriction of a degeneration to one fibre of the base: the projective
// space P^m over the line, with the same weights.
TestConfiguration make_fibre_test_configuration(const FibrationDegeneration& degeneration);

// Deformation to the normal cone of a point on the projective line polarised
// by the degree-d bundle: blowup of (line) × (line) at a point, polarised by
// d * (pullback) - exceptional.
TestConfiguration make_point_normal_cone_tc(int degree);

// Blowup presentation of the product-type configuration of the projective
// line (degree-one polarization) with weights (1, 0); the pullback of the
// original polarization is honestly representable here.
TestConfiguration make_resolved_product_tc();

// Blowup presentation of a rank-two zero/one-weight degeneration; resolves
// the rational map from X × line and represents the pullback of H exactly.
struct ResolvedDegenerationModel {
  ModelPtr model;
  DivisorClass Hcal;
  DivisorClass Lcal;
  DivisorClass Hpull;
  DivisorClass K_rel_line;
  DivisorClass central_slice;
};

ResolvedDegenerationModel resolve_rank2_degeneration(const FibrationDegeneration& degeneration);

}  // namespace kfib
