#include "kfib/invariants.hpp"

#include <algorithm>
#include <sstream>

namespace kfib {

namespace {

// (j A + B)^power paired against the extra classes, as a polynomial in j.
Poly power_pairing(const ChowModel& model, const DivisorClass& A, const DivisorClass& B,
                   int power, const std::vector<DivisorClass>& extras) {
  if (power < 0) throw std::invalid_argument("power_pairing: negative power");
  std::vector<Rational> coeffs(static_cast<size_t>(power) + 1, Rational(0));
  for (int a = 0; a <= power; ++a) {
    std::vector<DivisorClass> classes(static_cast<size_t>(a), A);
    classes.insert(classes.end(), static_cast<size_t>(power - a), B);
    classes.insert(classes.end(), extras.begin(), extras.end());
    coeffs[static_cast<size_t>(a)] =
        Rational(binomial(power, a)) * intersect(model, classes);
  }
  return Poly(std::move(coeffs));
}

std::vector<DivisorClass> repeated(const DivisorClass& cls, int count) {
  return std::vector<DivisorClass>(static_cast<size_t>(count), cls);
}

Rational fibre_volume(const TestConfiguration& tc) {
  const int q = tc.model->dimension() - 1;
  std::vector<DivisorClass> classes = repeated(tc.polarization, q);
  classes.push_back(tc.fibre_slice);
  return intersect(*tc.model, classes);
}

}  // namespace

Rational slope_variety(const ChowModel& variety, const DivisorClass& L) {
  const int q = variety.dimension();
  if (q < 1) throw std::invalid_argument("slope needs a positive-dimensional variety");
  const Rational volume = intersect(variety, repeated(L, q));
  if (volume == 0) throw ZeroVolume("slope: polarization has zero volume");
  std::vector<DivisorClass> classes = repeated(L, q - 1);
  classes.push_back(variety.canonical());
  return -intersect(variety, classes) / volume;
}

Rational df_intersection(const TestConfiguration& tc) {
  const int q = tc.model->dimension() - 1;
  if (q < 1) throw std::invalid_argument("family invariant needs positive-dimensional fibres");
  const Rational volume = fibre_volume(tc);
  if (volume == 0) throw ZeroVolume("family invariant: general fibre has zero volume");
  std::vector<DivisorClass> slope_classes = repeated(tc.polarization, q - 1);
  slope_classes.push_back(tc.K_rel_line);
  slope_classes.push_back(tc.fibre_slice);
  const Rational fibre_slope = -intersect(*tc.model, slope_classes) / volume;
  const Rational top = intersect(*tc.model, repeated(tc.polarization, q + 1));
  std::vector<DivisorClass> canonical_pairing = repeated(tc.polarization, q);
  canonical_pairing.push_back(tc.K_rel_line);
  const Rational canonical_term = intersect(*tc.model, canonical_pairing);
  return Rational(q) / Rational(q + 1) * fibre_slope * top + canonical_term;
}

Rational df_weights(const Poly& h, const Poly& w) {
  if (h.is_zero()) throw std::invalid_argument("df_weights: zero section-count polynomial");
  const int q = h.degree();
  if (w.degree() > q + 1)
    throw DegreeMismatch("df_weights: weight polynomial of degree " +
                         std::to_string(w.degree()) + " against section counts of degree " +
                         std::to_string(q));
  const Rational a0 = h.coefficient(q);
  const Rational a1 = h.coefficient(q - 1);
  const Rational b0 = w.coefficient(q + 1);
  const Rational b1 = w.coefficient(q);
  const Rational raw = (b0 * a1 - b1 * a0) / a0;
  return Rational(2) * Rational(factorial(static_cast<unsigned>(q))) * raw;
}

DFExpansion df_fibration_expansion(const FibrationDegeneration& degeneration) {
  const PolarisedFibration& fib = degeneration.parent;
  const int n = fib.n;
  const int nm = fib.n + fib.m;
  const ChowModel& X = *fib.total;
  const ChowModel& W = *degeneration.total_model;
  const Poly A = power_pairing(X, fib.L, fib.H, nm - 1, {-fib.K});
  const Poly C = power_pairing(X, fib.L, fib.H, nm, {});
  const Poly B = power_pairing(W, degeneration.Lcal, degeneration.Hcal, nm + 1, {});
  const Poly D = power_pairing(W, degeneration.Lcal, degeneration.Hcal, nm,
                               {degeneration.K_rel_line});
  const Poly numerator = A * B * Rational(nm) * (Rational(1) / Rational(nm + 1)) + D * C;
  auto [quotient, remainder] = numerator.divmod(C);
  if (quotient.degree() > n)
    throw std::logic_error("family invariant expansion exceeds degree " + std::to_string(n) +
                           " in j");
  DFExpansion out;
  out.polynomial_part = quotient;
  out.W0 = quotient.coefficient(n);
  out.W1 = quotient.coefficient(n - 1);
  for (int i = n - 2; i >= 0; --i) out.lower_terms.push_back(quotient.coefficient(i));
  out.remainder_numerator = remainder;
  out.volume_poly = C;
  return out;
}

Rational w0_via_fibre(const FibrationDegeneration& degeneration) {
  const PolarisedFibration& fib = degeneration.parent;
  const Rational base_volume =
      intersect(*fib.bundle.base, repeated(fib.L, fib.n));
  const TestConfiguration fibre_tc = make_fibre_test_configuration(degeneration);
  return Rational(binomial(fib.n + fib.m, fib.n)) * base_volume * df_intersection(fibre_tc);
}

ClosedFormAudit audit_closed_forms(const FibrationDegeneration& degeneration,
                                   const DFExpansion& expansion) {
  const PolarisedFibration& fib = degeneration.parent;
  const int n = fib.n;
  const int m = fib.m;
  if (m < 1) throw std::invalid_argument("closed forms need positive-dimensional fibres");
  const ChowModel& X = *fib.total;
  const ChowModel& W = *degeneration.total_model;

  const Rational den = intersect_powers(X, {{fib.L, n}, {fib.H, m}});
  if (den == 0) throw ZeroVolume("closed forms: (L^n . H^m) vanishes");
  std::vector<DivisorClass> rel_deg = repeated(fib.L, n);
  rel_deg.insert(rel_deg.end(), static_cast<size_t>(m - 1), fib.H);
  rel_deg.push_back(-fib.K_rel);
  const Rational num1 = intersect(X, rel_deg);

  const Rational I1 =
      intersect_powers(W, {{degeneration.Lcal, n}, {degeneration.Hcal, m + 1}});
  std::vector<DivisorClass> i2 = repeated(degeneration.Lcal, n);
  i2.insert(i2.end(), static_cast<size_t>(m), degeneration.Hcal);
  i2.push_back(degeneration.K_rel_base_line);
  const Rational I2 = intersect(W, i2);

  ClosedFormAudit out;
  out.W0_closed = Rational(binomial(n + m, n)) *
                  (Rational(m) / Rational(m + 1) * (num1 / den) * I1 + I2);

  out.C1 = Rational(m) / Rational(m + 2) * (num1 / den) *
           intersect_powers(W, {{degeneration.Lcal, n - 1}, {degeneration.Hcal, m + 2}});
  const Rational cross = intersect_powers(X, {{fib.L, n - 1}, {fib.H, m + 1}});
  out.C2 = -(Rational(m) / Rational(m + 1)) * (num1 * cross / (den * den)) * I1;
  std::vector<DivisorClass> c3_classes = repeated(fib.L, n - 1);
  c3_classes.insert(c3_classes.end(), static_cast<size_t>(m), fib.H);
  c3_classes.push_back(-fib.K);
  out.C3 = (intersect(X, c3_classes) / den) * I1;
  std::vector<DivisorClass> c4_classes = repeated(degeneration.Lcal, n - 1);
  c4_classes.insert(c4_classes.end(), static_cast<size_t>(m + 1), degeneration.Hcal);
  c4_classes.push_back(degeneration.K_rel_line);
  out.C4 = intersect(W, c4_classes);
  out.W1_closed =
      Rational(binomial(n + m, n - 1)) * (out.C1 + out.C2 + out.C3 + out.C4);

  out.W0_matches = (out.W0_closed == expansion.W0);
  out.W1_matches = (out.W1_closed == expansion.W1);
  return out;
}

Rational min_norm_tc(const TestConfiguration& tc) {
  if (!tc.original_pullback)
    throw HpullNotRepresentable(
        "minimum norm from the defining formula needs the pullback of the original "
        "polarization on the family model");
  const int q = tc.model->dimension() - 1;
  const Rational top = intersect(*tc.model, repeated(tc.polarization, q + 1));
  std::vector<DivisorClass> cross = repeated(tc.polarization, q);
  cross.push_back(*tc.original_pullback);
  const Rational paired = intersect(*tc.model, cross);
  return paired - Rational(q) / Rational(q + 1) * top;
}

Rational min_norm_fibration(const FibrationDegeneration& degeneration) {
  const TestConfiguration fibre_tc = make_fibre_test_configuration(degeneration);
  const Poly h = fibre_hilbert_poly(fibre_tc);
  const Poly w = fibre_weight_poly(fibre_tc);
  const int m = degeneration.parent.m;
  const long w_max =
      *std::max_element(degeneration.weights.begin(), degeneration.weights.end());
  const Rational sup = Rational(degeneration.parent.H_xi) * Rational(w_max);
  return sup * h.coefficient(m) - w.coefficient(m + 1);
}

SupNormExpansion linf_norm(const FibrationDegeneration& degeneration, const Poly& a0_of_j,
                           const Poly& b0_of_j) {
  if (degeneration.weights.empty())
    throw NotBundleType("sup-norm expansion needs per-summand weights");
  const int n = degeneration.parent.n;
  const Rational a00 = a0_of_j.coefficient(n);
  if (a00 == 0) throw std::invalid_argument("sup norm: leading section coefficient vanishes");
  const Rational r_bar = b0_of_j.coefficient(n) / a00;
  const Poly deviation = b0_of_j - a0_of_j * r_bar;
  const Rational r1 = deviation.coefficient(n - 1) / a00;

  // Pin the normalization of the spectrum against honest enumeration: the
  // extreme normalized weights must equal H_xi * (extreme summand weight).
  const long w_max =
      *std::max_element(degeneration.weights.begin(), degeneration.weights.end());
  const long w_min =
      *std::min_element(degeneration.weights.begin(), degeneration.weights.end());
  const long j_probe = validity_threshold(degeneration.parent);
  for (long k : {1L, 2L}) {
    const WeightSpectrum spectrum = weight_spectrum(degeneration, j_probe, k);
    if (spectrum.max_weight() != k * degeneration.parent.H_xi * w_max ||
        spectrum.min_weight() != k * degeneration.parent.H_xi * w_min)
      throw std::logic_error("spectrum extremes disagree with the summand weights");
  }
  const Rational sup = Rational(degeneration.parent.H_xi) * Rational(w_max);
  const Rational inf = Rational(degeneration.parent.H_xi) * Rational(w_min);

  const Rational upper = sup - r_bar;
  const Rational lower = r_bar - inf;
  SupNormExpansion out;
  out.c0 = std::max(upper, lower);
  if (upper > lower) out.c1 = -r1;
  else if (lower > upper) out.c1 = r1;
  else out.c1 = r1 < 0 ? -r1 : r1;
  return out;
}

ChowWeight chow_weight(const FibrationDegeneration& degeneration,
                       const BivariatePolynomial& fitted_w) {
  const PolarisedFibration& fib = degeneration.parent;
  ChowWeight out;
  out.intersection_number = intersect_powers(
      *degeneration.total_model, {{degeneration.Hcal, fib.m + 1}, {degeneration.Lcal, fib.n}});
  out.fitted_b00 = fitted_w.coefficient(fib.n, fib.n + fib.m + 1);
  if (out.intersection_number != 0) out.ratio = out.fitted_b00 / out.intersection_number;
  return out;
}

FanoInvariants fano_invariants(const FibrationDegeneration& degeneration) {
  const PolarisedFibration& fib = degeneration.parent;
  if (!(fib.H + fib.K_rel == DivisorClass::zero()))
    throw NotFano("the relatively ample class is not the relative anticanonical class: H = " +
                  fib.H.str() + ", relative canonical = " + fib.K_rel.str());
  const int n = fib.n;
  const int m = fib.m;
  const ChowModel& X = *fib.total;
  const ChowModel& W = *degeneration.total_model;
  const DivisorClass anti_rel = -fib.K_rel;

  const Rational gamma_den = intersect_powers(X, {{fib.L, n}, {anti_rel, m}});
  if (gamma_den == 0) throw ZeroVolume("Fano specialization: (L^n . (-K_rel)^m) vanishes");
  const Rational gamma_num = intersect_powers(X, {{fib.L, n - 1}, {anti_rel, m + 1}});
  FanoInvariants out;
  out.gamma = gamma_num / gamma_den;

  const Rational I1 =
      intersect_powers(W, {{degeneration.Lcal, n}, {degeneration.Hcal, m + 1}});
  std::vector<DivisorClass> i2 = repeated(degeneration.Lcal, n);
  i2.insert(i2.end(), static_cast<size_t>(m), degeneration.Hcal);
  i2.push_back(degeneration.K_rel_base_line);
  const Rational I2 = intersect(W, i2);
  out.W0_fano =
      Rational(binomial(n + m, n)) * (Rational(m) / Rational(m + 1) * I1 + I2);

  std::vector<DivisorClass> last = repeated(degeneration.Lcal, n - 1);
  last.insert(last.end(), static_cast<size_t>(m + 1), degeneration.Hcal);
  last.push_back(degeneration.K_rel_base_line);
  out.W1_fano = Rational(binomial(n + m, n - 1)) *
                (Rational(m) / Rational(m + 2) *
                     intersect_powers(W, {{degeneration.Lcal, n - 1},
                                          {degeneration.Hcal, m + 2}}) +
                 out.gamma / Rational(m + 1) * I1 + intersect(W, last));
  return out;
}

Rational j_weight(const TestConfiguration& tc, const DivisorClass& T) {
  const int q = tc.model->dimension() - 1;
  if (q < 1) throw std::invalid_argument("base-directed weight needs positive-dimensional fibres");
  const Rational volume = fibre_volume(tc);
  if (volume == 0) throw ZeroVolume("base-directed weight: general fibre has zero volume");
  std::vector<DivisorClass> ratio_classes = repeated(tc.polarization, q - 1);
  ratio_classes.push_back(T);
  ratio_classes.push_back(tc.fibre_slice);
  const Rational ratio = intersect(*tc.model, ratio_classes) / volume;
  std::vector<DivisorClass> direct = repeated(tc.polarization, q);
  direct.push_back(T);
  const Rational top = intersect(*tc.model, repeated(tc.polarization, q + 1));
  return intersect(*tc.model, direct) - Rational(q) / Rational(q + 1) * ratio * top;
}

JWeightExpansion j_weight_expansion(const FibrationDegeneration& degeneration,
                                    const DivisorClass& T) {
  const PolarisedFibration& fib = degeneration.parent;
  for (const auto& [g, v] : T.terms())
    if (!fib.bundle.base->has_generator(g))
      throw DimensionMismatch("base-directed weight: class uses generator '" + g +
                              "' which is not pulled back from the base");
  const int nm = fib.n + fib.m;
  const ChowModel& X = *fib.total;
  const ChowModel& W = *degeneration.total_model;
  const Poly direct = power_pairing(W, degeneration.Lcal, degeneration.Hcal, nm, {T});
  const Poly ratio_num = power_pairing(X, fib.L, fib.H, nm - 1, {T});
  const Poly C = power_pairing(X, fib.L, fib.H, nm, {});
  const Poly B = power_pairing(W, degeneration.Lcal, degeneration.Hcal, nm + 1, {});
  const Poly numerator =
      direct * C - ratio_num * B * Rational(nm) * (Rational(1) / Rational(nm + 1));
  auto [quotient, remainder] = numerator.divmod(C);
  return {quotient, remainder, C};
}

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::W0Positive: return "W0Positive";
    case Verdict::W0ZeroW1Positive: return "W0ZeroW1Positive";
    case Verdict::W0ZeroW1Zero_NormZero: return "W0ZeroW1Zero_NormZero";
    case Verdict::W0ZeroW1Zero_NormPositive_ProductDetected:
      return "W0ZeroW1Zero_NormPositive_ProductDetected";
    case Verdict::W0ZeroW1Zero_Inconclusive: return "W0ZeroW1Zero_Inconclusive";
    case Verdict::UnstableCertificate: return "UnstableCertificate";
  }
  return "unknown";
}

namespace {

std::string describe_degeneration(const FibrationDegeneration& degeneration) {
  std::ostringstream out;
  if (degeneration.subsheaf) {
    out << "F={";
    bool first = true;
    for (int i : *degeneration.subsheaf) {
      if (!first) out << ",";
      first = false;
      out << i;
    }
    out << "}";
    return out.str();
  }
  if (degeneration.is_trivial) return "trivial";
  out << "weights (";
  bool first = true;
  for (long w : degeneration.weights) {
    if (!first) out << ",";
    first = false;
    out << w;
  }
  out << ")";
  return out.str();
}

void run_oracle_checks(const FibrationDegeneration& degeneration, const FittedCounts& fits,
                       const DFExpansion& expansion) {
  verify_euler_characteristic_identity(degeneration, fits.grid);
  // The fitted tables must reproduce the honest spectrum at a sample point.
  const long j = fits.grid.j_values.front();
  const long k = fits.grid.k_values.front();
  const WeightSpectrum spectrum = weight_spectrum(degeneration, j, k);
  if (fits.h(Rational(j), Rational(k)) != Rational(spectrum.total_multiplicity()) ||
      fits.w(Rational(j), Rational(k)) != Rational(spectrum.total_weight()))
    throw std::logic_error("fitted tables disagree with the spectrum totals");
  // Dual-route invariant at two sampled j: the weight route (suitably
  // normalized) must equal the exact intersection expansion.
  for (size_t idx = 0; idx < 2 && idx < fits.grid.j_values.size(); ++idx) {
    const long jv = fits.grid.j_values[idx];
    const Poly h_slice = fits.h.at_j(Rational(jv));
    const Poly w_slice = fits.w.at_j(Rational(jv));
    const Rational weight_route = df_weights(h_slice, w_slice);
    const Rational volume = expansion.volume_poly(Rational(jv));
    const Rational intersection_route =
        expansion.polynomial_part(Rational(jv)) +
        expansion.remainder_numerator(Rational(jv)) / volume;
    if (weight_route != intersection_route)
      throw std::logic_error("dual-route family invariant disagrees at j = " +
                             std::to_string(jv));
  }
}

}  // namespace

StabilityReport classify(const PolarisedFibration& fibration,
                         const std::vector<FibrationDegeneration>& degenerations,
                         const ClassifyOptions& options) {
  StabilityReport report;
  report.n = fibration.n;
  report.m = fibration.m;
  report.rank = fibration.bundle.rank();
  report.bundle_slope = slope_sheaf(fibration.bundle, fibration.L);
  for (int i = 0; i < report.rank; ++i)
    report.summand_slopes.push_back(slope_sheaf(fibration.bundle, {i}, fibration.L));

  for (size_t index = 0; index < degenerations.size(); ++index) {
    const auto& degeneration = degenerations[index];
    try {
    DegenerationRecord rec;
    rec.label = describe_degeneration(degeneration);
    rec.weights = degeneration.weights;
    rec.subsheaf = degeneration.subsheaf;
    if (degeneration.subsheaf)
      rec.subsheaf_slope = slope_sheaf(fibration.bundle, *degeneration.subsheaf, fibration.L);

    rec.df = df_fibration_expansion(degeneration);
    rec.w0_fibre_route = w0_via_fibre(degeneration);
    if (rec.w0_fibre_route != rec.df.W0)
      throw std::logic_error("fibre-route leading coefficient disagrees with the expansion for " +
                             rec.label);
    rec.audit = audit_closed_forms(degeneration, rec.df);
    rec.minimum_norm = min_norm_fibration(degeneration);

    const FittedCounts fits = fit_h_and_w(degeneration, options.fit);
    rec.sup_norm = linf_norm(degeneration, fits.h.coefficient_of_k(report.n + report.m),
                             fits.w.coefficient_of_k(report.n + report.m + 1));
    rec.chow = chow_weight(degeneration, fits.w);
    if (options.oracle_check) run_oracle_checks(degeneration, fits, rec.df);
    if (options.fano_check) {
      rec.fano = fano_invariants(degeneration);
      report.gamma = rec.fano->gamma;
    }

    rec.product_detected = !degeneration.weights.empty();
    const Rational& W0 = rec.df.W0;
    const Rational& W1 = rec.df.W1;
    if (W0 < 0 || (W0 == 0 && W1 < 0)) {
      rec.verdict = Verdict::UnstableCertificate;
      rec.consistency_violation = (W0 < 0);
      std::ostringstream cert;
      if (W0 < 0) {
        cert << "W0 = " << W0.str() << " < 0 for " << rec.label
             << " (consistency violation: fibres are polystable)";
      } else {
        cert << "W0 = 0 and W1 = " << W1.str() << " < 0 for " << rec.label;
        if (rec.subsheaf_slope)
          cert << " (slope " << rec.subsheaf_slope->str() << " of the sub-direct-sum exceeds "
               << report.bundle_slope.str() << ")";
      }
      rec.certificate = cert.str();
      report.certificates.push_back(*rec.certificate);
      report.unstable = true;
    } else if (W0 > 0) {
      rec.verdict = Verdict::W0Positive;
    } else if (W1 > 0) {
      rec.verdict = Verdict::W0ZeroW1Positive;
    } else if (rec.minimum_norm == 0) {
      rec.verdict = Verdict::W0ZeroW1Zero_NormZero;
    } else if (rec.product_detected) {
      rec.verdict = Verdict::W0ZeroW1Zero_NormPositive_ProductDetected;
    } else {
      rec.verdict = Verdict::W0ZeroW1Zero_Inconclusive;
    }
    report.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw std::runtime_error("degeneration " + std::to_string(index) + " (" +
                               describe_degeneration(degeneration) + "): " + e.what());
    }
  }

  if (report.unstable) {
    report.summary = "unstable: " + report.certificates.front();
  } else if (report.records.empty()) {
    report.summary = "vacuously stable: no nontrivial degenerations supplied";
  } else {
    report.summary = "not destabilized by the supplied family";
  }
  return report;
}

}  // namespace kfib
