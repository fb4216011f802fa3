#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/oracle.hpp"

namespace kfib {

// Thrown when a slope or ratio needs a positive self-intersection that is zero.
struct ZeroVolume : std::runtime_error {
  explicit ZeroVolume(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by df_weights when the weight polynomial's degree exceeds what a
// flat family over the line can produce.
struct DegreeMismatch : std::runtime_error {
  explicit DegreeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the pullback of the original polarization is not representable
// on the family model, so the direct norm formula has no honest input.
struct HpullNotRepresentable : std::runtime_error {
  explicit HpullNotRepresentable(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a Fano specialization is requested but the relatively ample
// class is not the relative anticanonical class.
struct NotFano : std::runtime_error {
  explicit NotFano(const std::string& what) : std::runtime_error(what) {}
};

// Slope of a polarised variety: -(K . L^{q-1}) / L^q.
Rational slope_variety(const ChowModel& variety, const DivisorClass& L);

// Invariant of a one-parameter family via intersection numbers on its
// compactified total space:
//   q/(q+1) * slope(general fibre) * polarization^{q+1}
//     + (canonical relative to the line) . polarization^q.
Rational df_intersection(const TestConfiguration& tc);

// The same invariant from the asymptotics of section counts h(k) and total
// weights w(k): 2 q! (b0 a1 - b1 a0)/a0 with a_i, b_i the leading
// coefficients. The normalization constant matches the intersection route.
Rational df_weights(const Poly& h, const Poly& w);

// Exact expansion in j of the family invariant of (j L + relatively ample
// class): a polynomial part of degree <= n plus a remainder that decays.
struct DFExpansion {
  Poly polynomial_part;    // degree <= n
  Rational W0;             // coefficient of j^n
  Rational W1;             // coefficient of j^{n-1}
  std::vector<Rational> lower_terms;  // coefficients j^{n-2} ... j^0
  Poly remainder_numerator;           // degree < deg volume_poly
  Poly volume_poly;                   // (jL + H)^{n+m} on the fibration
};

DFExpansion df_fibration_expansion(const FibrationDegeneration& degeneration);

// Leading coefficient via the general-fibre family: the count-weighted
// binomial times the base volume times the fibre family's invariant.
Rational w0_via_fibre(const FibrationDegeneration& degeneration);

// Displayed closed forms recomputed independently and compared with the
// direct expansion.
struct ClosedFormAudit {
  Rational W0_closed;
  Rational W1_closed;
  Rational C1, C2, C3, C4;  // the four contributions to W1 before the prefactor
  bool W0_matches = false;
  bool W1_matches = false;
};

ClosedFormAudit audit_closed_forms(const FibrationDegeneration& degeneration,
                                   const DFExpansion& expansion);

// Minimum norm of a one-parameter family, by its defining formula
//   polarization^{q+1}/(q+1) - polarization^q . (polarization - pullback).
// Needs the honest pullback of the original polarization on the model.
Rational min_norm_tc(const TestConfiguration& tc);

// Minimum norm of a fibration degeneration = minimum norm of its general
// fibre's induced family, computed from the fibre section/weight asymptotics:
// (sup of normalized weights) * a0 - b0.
Rational min_norm_fibration(const FibrationDegeneration& degeneration);

// Sup-norm expansion max_i |lambda_i/k - b0(j)/a0(j)| = c0 + c1/j + ...
struct SupNormExpansion {
  Rational c0;
  Rational c1;
};

SupNormExpansion linf_norm(const FibrationDegeneration& degeneration, const Poly& a0_of_j,
                           const Poly& b0_of_j);

// The one-parameter-subgroup weight on the Chow line: the intersection
// number Hcal^{m+1} . Lcal^n, the fitted leading coefficient b00 of the
// weight polynomial, and their ratio where defined.
struct ChowWeight {
  Rational intersection_number;
  Rational fitted_b00;
  std::optional<Rational> ratio;  // fitted_b00 / intersection_number
};

ChowWeight chow_weight(const FibrationDegeneration& degeneration,
                       const BivariatePolynomial& fitted_w);

// Specialized forms for relatively anticanonically polarised bundles.
struct FanoInvariants {
  Rational gamma;
  Rational W0_fano;
  Rational W1_fano;
};

FanoInvariants fano_invariants(const FibrationDegeneration& degeneration);

// Base-directed weight J_T = polarization^q . T
//   - q/(q+1) * (T.L^{q-1}/L^q on the general fibre) * polarization^{q+1}.
Rational j_weight(const TestConfiguration& tc, const DivisorClass& T);

// Its exact expansion in j for a fibration degeneration; the quotient's j^n
// and j^{n-1} coefficients vanish for bundle degenerations.
struct JWeightExpansion {
  Poly polynomial_part;
  Poly remainder_numerator;
  Poly volume_poly;
};

JWeightExpansion j_weight_expansion(const FibrationDegeneration& degeneration,
                                    const DivisorClass& T);

enum class Verdict {
  W0Positive,
  W0ZeroW1Positive,
  W0ZeroW1Zero_NormZero,
  W0ZeroW1Zero_NormPositive_ProductDetected,
  W0ZeroW1Zero_Inconclusive,
  UnstableCertificate,
};

std::string verdict_name(Verdict verdict);

struct DegenerationRecord {
  std::string label;
  std::vector<long> weights;
  std::optional<std::vector<int>> subsheaf;
  std::optional<Rational> subsheaf_slope;
  DFExpansion df;
  Rational w0_fibre_route;
  ClosedFormAudit audit;
  Rational minimum_norm;
  SupNormExpansion sup_norm;
  ChowWeight chow;
  std::optional<FanoInvariants> fano;
  Verdict verdict = Verdict::W0ZeroW1Zero_Inconclusive;
  bool product_detected = false;
  std::optional<std::string> certificate;
  bool consistency_violation = false;  // W0 < 0, impossible over polystable fibres
};

struct StabilityReport {
  int n = 0;
  int m = 0;
  int rank = 0;
  Rational bundle_slope;
  std::vector<Rational> summand_slopes;
  std::vector<DegenerationRecord> records;
  std::optional<Rational> gamma;  // set when the Fano specialization ran
  bool unstable = false;
  std::vector<std::string> certificates;
  std::string summary;
};

struct ClassifyOptions {
  bool fano_check = false;
  bool oracle_check = false;
  FitOptions fit;
};

// Full analysis of a family of degenerations: every invariant above per
// degeneration, verdicts, and an overall summary. With oracle_check set,
// every dual-route identity is verified and a mismatch aborts.
StabilityReport classify(const PolarisedFibration& fibration,
                         const std::vector<FibrationDegeneration>& degenerations,
                         const ClassifyOptions& options = {});

}  // namespace kfib
