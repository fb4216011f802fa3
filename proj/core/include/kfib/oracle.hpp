#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kfib/models.hpp"
#include "kfib/polynomial.hpp"

namespace kfib {

// Thrown when section enumeration is impossible for the given data: the base
// polarization is not positive on some factor, or the twist data is not
// integral.
struct NegativeTwist : std::runtime_error {
  explicit NegativeTwist(const std::string& what) : std::runtime_error(what) {}
};

// A finite-dimensional representation decomposed by scaling weight.
struct WeightSpectrum {
  std::map<long, Integer> multiplicities;

  Integer total_multiplicity() const;
  Integer total_weight() const;
  long max_weight() const;
  long min_weight() const;
};

struct EnumerationGrid {
  std::vector<long> j_values;
  std::vector<long> k_values;
};

struct FitOptions {
  std::optional<std::vector<long>> j_values;  // default: adaptive grid
  std::optional<std::vector<long>> k_values;
  long k_start = 1;
  long max_k = 24;
};

// Number of sections of the k-th power of (j L + H) on the fibration's total
// space, by direct Sym-decomposition over the base factors.
Integer hilbert_count(const PolarisedFibration& fibration, long j, long k);

// Total scaling weight of that space of sections under the degeneration.
Integer weight_polynomial(const FibrationDegeneration& degeneration, long j, long k);

// Full weight decomposition.
WeightSpectrum weight_spectrum(const FibrationDegeneration& degeneration, long j, long k);

// Euler characteristic of the k-th power of (j Lcal + Hcal) on the
// compactified family, via exact per-factor polynomials. Independent of the
// section count; agrees with hilbert_count + weight_polynomial wherever all
// twists are nonnegative.
Rational family_euler_characteristic(const FibrationDegeneration& degeneration, long j,
                                     long k);

// Least j at which every twist appearing in the Sym-decomposition of the
// k-th power is nonnegative (then counting and Euler characteristic agree).
long validity_threshold(const PolarisedFibration& fibration);

EnumerationGrid default_grid(const PolarisedFibration& fibration,
                             const FitOptions& options = {});

struct FittedCounts {
  BivariatePolynomial h;
  BivariatePolynomial w;
  EnumerationGrid grid;
};

// Enumerate sections and weights over a valid grid and interpolate exactly.
// The fitted polynomials are verified to have exact degrees
// (deg_j, deg_k) = (n, n+m) for h and deg_k = n+m+1, deg_j <= n for w
// (k-degree check waived for identically-zero w).
FittedCounts fit_h_and_w(const FibrationDegeneration& degeneration,
                         const FitOptions& options = {});

// Checks h + w == Euler characteristic of the family at every grid point.
void verify_euler_characteristic_identity(const FibrationDegeneration& degeneration,
                                          const EnumerationGrid& grid);

// Fibre-level (single-variable) enumeration for product-type configurations:
// sections of the k-th polarization power on the fibre, decomposed by weight.
WeightSpectrum fibre_weight_spectrum(const TestConfiguration& tc, long k);
Poly fibre_hilbert_poly(const TestConfiguration& tc);
Poly fibre_weight_poly(const TestConfiguration& tc);

// Weight polynomial of a two-dimensional family from the exact Euler
// characteristic on the model (degree and canonical data only; no
// enumeration): w(k) = chi(k * polarization) - h(k), with h taken from the
// general fibre.
Poly tc_weight_poly_via_chi(const TestConfiguration& tc);

// Section-count polynomial of the general fibre of a family read off the
// model: for one-dimensional fibres of degree d this is d*k + 1.
Poly tc_hilbert_poly_from_model(const TestConfiguration& tc);

}  // namespace kfib
