#include "kfib/oracle.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

namespace kfib {

namespace {

long to_long(const Rational& value, const std::string& what) {
  if (denominator(value) != 1)
    throw NegativeTwist(what + ": enumeration needs integer data, got " + value.str());
  const Integer num = numerator(value);
  if (num > (std::numeric_limits<long>::max)() || num < (std::numeric_limits<long>::min)())
    throw NegativeTwist(what + ": value out of range");
  return static_cast<long>(num);
}

// Everything needed to decompose sections of k(jL + H) over the base factors.
struct EnumerationData {
  std::vector<int> factor_dims;
  std::vector<long> lambda;                // L coefficient per factor, > 0
  std::vector<long> beta;                  // H base coefficient per factor
  long q_xi = 1;                           // H coefficient on the relative class
  std::vector<std::vector<long>> degrees;  // degrees[summand][factor]
  std::vector<long> weights;               // empty when only counting
};

EnumerationData enumeration_data(const PolarisedFibration& fibration,
                                 const std::vector<long>* weights) {
  EnumerationData data;
  data.q_xi = fibration.H_xi;
  for (const auto& f : fibration.bundle.base->factors()) {
    data.factor_dims.push_back(f.dim);
    const long lam = to_long(fibration.L.coefficient(f.name), "base polarization");
    if (lam <= 0)
      throw NegativeTwist("base polarization must be positive on factor '" + f.name + "'");
    data.lambda.push_back(lam);
    data.beta.push_back(to_long(fibration.H_base.coefficient(f.name), "relatively ample class"));
  }
  for (const auto& s : fibration.bundle.summands) {
    std::vector<long> row;
    for (const auto& f : fibration.bundle.base->factors())
      row.push_back(to_long(s.coefficient(f.name), "summand degree"));
    data.degrees.push_back(row);
  }
  if (weights) {
    if (weights->size() != data.degrees.size())
      throw WrongArity("enumeration: " + std::to_string(weights->size()) + " weights for " +
                       std::to_string(data.degrees.size()) + " summands");
    data.weights = *weights;
  }
  return data;
}

// Walk all exponent vectors of total degree k*q_xi over the summands,
// reporting each monomial's weight and its section count over the base.
void enumerate_sections(const EnumerationData& data, long j, long k,
                        const std::function<void(long, const Integer&)>& visit) {
  const size_t r = data.degrees.size();
  const size_t nf = data.factor_dims.size();
  std::vector<long> twist(nf);
  for (size_t f = 0; f < nf; ++f) twist[f] = k * (j * data.lambda[f] + data.beta[f]);
  const long budget = k * data.q_xi;
  std::vector<long> partial(nf);
  // Recurse over summands; the last summand takes the remaining budget.
  auto rec = [&](auto&& self, size_t i, long remaining, long weight_acc) -> void {
    if (i + 1 == r) {
      Integer count = 1;
      for (size_t f = 0; f < nf && count != 0; ++f) {
        const long deg = twist[f] + partial[f] + remaining * data.degrees[i][f];
        count *= sections_projective_line_bundle(static_cast<unsigned>(data.factor_dims[f]),
                                                 deg);
      }
      if (count != 0)
        visit(weight_acc + (data.weights.empty() ? 0 : remaining * data.weights[i]), count);
      return;
    }
    for (long a = 0; a <= remaining; ++a) {
      self(self, i + 1, remaining - a,
           weight_acc + (data.weights.empty() ? 0 : a * data.weights[i]));
      for (size_t f = 0; f < nf; ++f) partial[f] += data.degrees[i][f];
    }
    for (size_t f = 0; f < nf; ++f) partial[f] -= (remaining + 1) * data.degrees[i][f];
  };
  rec(rec, 0, budget, 0);
}

}  // namespace

Integer WeightSpectrum::total_multiplicity() const {
  Integer out = 0;
  for (const auto& [w, mult] : multiplicities) out += mult;
  return out;
}

Integer WeightSpectrum::total_weight() const {
  Integer out = 0;
  for (const auto& [w, mult] : multiplicities) out += Integer(w) * mult;
  return out;
}

long WeightSpectrum::max_weight() const {
  if (multiplicities.empty()) throw std::runtime_error("empty weight spectrum");
  return multiplicities.rbegin()->first;
}

long WeightSpectrum::min_weight() const {
  if (multiplicities.empty()) throw std::runtime_error("empty weight spectrum");
  return multiplicities.begin()->first;
}

Integer hilbert_count(const PolarisedFibration& fibration, long j, long k) {
  if (k < 0) throw std::invalid_argument("hilbert_count: negative power");
  if (k == 0) return 1;
  const EnumerationData data = enumeration_data(fibration, nullptr);
  Integer total = 0;
  enumerate_sections(data, j, k, [&](long, const Integer& count) { total += count; });
  return total;
}

Integer weight_polynomial(const FibrationDegeneration& degeneration, long j, long k) {
  if (k < 0) throw std::invalid_argument("weight_polynomial: negative power");
  if (k == 0) return 0;
  const EnumerationData data = enumeration_data(degeneration.parent, &degeneration.weights);
  Integer total = 0;
  enumerate_sections(data, j, k,
                     [&](long w, const Integer& count) { total += Integer(w) * count; });
  return total;
}

WeightSpectrum weight_spectrum(const FibrationDegeneration& degeneration, long j, long k) {
  if (k < 1) throw std::invalid_argument("weight_spectrum: power must be positive");
  const EnumerationData data = enumeration_data(degeneration.parent, &degeneration.weights);
  WeightSpectrum out;
  enumerate_sections(data, j, k, [&](long w, const Integer& count) {
    auto [it, inserted] = out.multiplicities.try_emplace(w, count);
    if (!inserted) it->second += count;
  });
  return out;
}

Rational family_euler_characteristic(const FibrationDegeneration& degeneration, long j,
                                     long k) {
  if (k < 0) throw std::invalid_argument("family_euler_characteristic: negative power");
  if (k == 0) return 1;
  const EnumerationData data = enumeration_data(degeneration.parent, &degeneration.weights);
  // chi is multiplicative over the summand decomposition with the line factor
  // contributing (weight + 1); unlike counting, negative twists contribute
  // through the polynomial form, so walk every monomial without pruning.
  const size_t r = data.degrees.size();
  const size_t nf = data.factor_dims.size();
  std::vector<long> twist(nf);
  for (size_t f = 0; f < nf; ++f) twist[f] = k * (j * data.lambda[f] + data.beta[f]);
  Rational total = 0;
  std::vector<long> alpha(r, 0);
  auto rec = [&](auto&& self, size_t i, long remaining) -> void {
    if (i + 1 == r) {
      alpha[i] = remaining;
      Rational term = 1;
      for (size_t f = 0; f < nf; ++f) {
        long deg = twist[f];
        for (size_t s = 0; s < r; ++s) deg += alpha[s] * data.degrees[s][f];
        term *= chi_projective_line_bundle(static_cast<unsigned>(data.factor_dims[f]),
                                           Integer(deg));
      }
      long w = 0;
      for (size_t s = 0; s < r; ++s) w += alpha[s] * data.weights[s];
      total += term * Rational(w + 1);
      return;
    }
    for (long a = 0; a <= remaining; ++a) {
      alpha[i] = a;
      self(self, i + 1, remaining - a);
    }
  };
  rec(rec, 0, k * data.q_xi);
  return total;
}

long validity_threshold(const PolarisedFibration& fibration) {
  const EnumerationData data = enumeration_data(fibration, nullptr);
  long threshold = 1;
  for (size_t f = 0; f < data.factor_dims.size(); ++f) {
    long min_deg = data.degrees[0][f];
    for (const auto& row : data.degrees) min_deg = std::min(min_deg, row[f]);
    // Least j with j*lambda + beta + q_xi*min_deg >= 0.
    const long need = -data.beta[f] - data.q_xi * min_deg;
    if (need > 0) {
      const long j_min = (need + data.lambda[f] - 1) / data.lambda[f];
      threshold = std::max(threshold, j_min);
    }
  }
  return threshold;
}

EnumerationGrid default_grid(const PolarisedFibration& fibration, const FitOptions& options) {
  const int n = fibration.n;
  const int m = fibration.m;
  EnumerationGrid grid;
  if (options.j_values) {
    grid.j_values = *options.j_values;
  } else {
    const long j0 = validity_threshold(fibration);
    for (long j = j0; j < j0 + n + 3; ++j) grid.j_values.push_back(j);
  }
  if (options.k_values) {
    grid.k_values = *options.k_values;
  } else {
    for (long k = options.k_start; k < options.k_start + n + m + 4; ++k)
      grid.k_values.push_back(k);
  }
  std::set<long> unique_j(grid.j_values.begin(), grid.j_values.end());
  std::set<long> unique_k(grid.k_values.begin(), grid.k_values.end());
  if (static_cast<int>(unique_j.size()) < n + 3 ||
      static_cast<int>(unique_k.size()) < n + m + 4)
    throw std::invalid_argument("grid too small: need " + std::to_string(n + 3) +
                                " distinct j values and " + std::to_string(n + m + 4) +
                                " distinct k values");
  const long j0 = validity_threshold(fibration);
  for (long j : grid.j_values)
    if (j < j0)
      throw std::invalid_argument("grid point j = " + std::to_string(j) +
                                  " is below the validity threshold " + std::to_string(j0));
  for (long k : grid.k_values) {
    if (k < 1) throw std::invalid_argument("grid needs k >= 1");
    if (k > options.max_k)
      throw std::invalid_argument("grid point k = " + std::to_string(k) +
                                  " exceeds the enumeration cap " +
                                  std::to_string(options.max_k));
  }
  return grid;
}

FittedCounts fit_h_and_w(const FibrationDegeneration& degeneration, const FitOptions& options) {
  const PolarisedFibration& fib = degeneration.parent;
  const int n = fib.n;
  const int m = fib.m;
  FittedCounts out;
  out.grid = default_grid(fib, options);
  std::vector<Sample> h_samples;
  std::vector<Sample> w_samples;
  for (long j : out.grid.j_values) {
    for (long k : out.grid.k_values) {
      const WeightSpectrum spectrum = weight_spectrum(degeneration, j, k);
      h_samples.push_back({j, k, Rational(spectrum.total_multiplicity())});
      w_samples.push_back({j, k, Rational(spectrum.total_weight())});
    }
  }
  out.h = poly_fit(h_samples, n + 1, n + m + 1);
  out.w = poly_fit(w_samples, n + 1, n + m + 2);
  if (out.h.degree_j() != n || out.h.degree_k() != n + m)
    throw std::logic_error("section counts violate the expected degree profile: got (" +
                           std::to_string(out.h.degree_j()) + ", " +
                           std::to_string(out.h.degree_k()) + "), expected (" +
                           std::to_string(n) + ", " + std::to_string(n + m) + ")");
  if (!out.w.is_zero() && out.w.degree_k() != n + m + 1)
    throw std::logic_error("weight totals violate the expected k-degree: got " +
                           std::to_string(out.w.degree_k()) + ", expected " +
                           std::to_string(n + m + 1));
  if (out.w.degree_j() > n)
    throw std::logic_error("weight totals violate the expected j-degree bound");
  return out;
}

void verify_euler_characteristic_identity(const FibrationDegeneration& degeneration,
                                          const EnumerationGrid& grid) {
  for (long j : grid.j_values) {
    for (long k : grid.k_values) {
      const Rational chi = family_euler_characteristic(degeneration, j, k);
      const Rational counted = Rational(hilbert_count(degeneration.parent, j, k)) +
                               Rational(weight_polynomial(degeneration, j, k));
      if (chi != counted)
        throw std::logic_error("Euler-characteristic route disagrees with enumeration at (j,k) = (" +
                               std::to_string(j) + "," + std::to_string(k) + ")");
    }
  }
}

namespace {

struct FibreData {
  long q_xi = 1;
  std::vector<long> weights;
  int m = 0;
};

FibreData fibre_data(const TestConfiguration& tc) {
  if (!tc.weights) throw NotBundleType("fibre enumeration needs per-summand weights");
  if (!tc.model->bundle())
    throw NotBundleType("fibre enumeration needs a bundle-type family model");
  FibreData out;
  out.weights = *tc.weights;
  out.m = static_cast<int>(out.weights.size()) - 1;
  out.q_xi = to_long(tc.polarization.coefficient(tc.model->bundle()->name),
                     "fibre polarization");
  if (out.q_xi < 1) throw NegativeTwist("fibre polarization must be positive on the fibres");
  return out;
}

void enumerate_fibre(const FibreData& data, long k,
                     const std::function<void(long)>& visit_weight) {
  const size_t r = data.weights.size();
  auto rec = [&](auto&& self, size_t i, long remaining, long weight_acc) -> void {
    if (i + 1 == r) {
      visit_weight(weight_acc + remaining * data.weights[i]);
      return;
    }
    for (long a = 0; a <= remaining; ++a)
      self(self, i + 1, remaining - a, weight_acc + a * data.weights[i]);
  };
  rec(rec, 0, k * data.q_xi, 0);
}

}  // namespace

WeightSpectrum fibre_weight_spectrum(const TestConfiguration& tc, long k) {
  if (k < 1) throw std::invalid_argument("fibre spectrum: power must be positive");
  const FibreData data = fibre_data(tc);
  WeightSpectrum out;
  enumerate_fibre(data, k, [&](long w) {
    auto [it, inserted] = out.multiplicities.try_emplace(w, Integer(1));
    if (!inserted) it->second += 1;
  });
  return out;
}

Poly fibre_hilbert_poly(const TestConfiguration& tc) {
  const FibreData data = fibre_data(tc);
  std::vector<std::pair<long, Rational>> samples;
  for (long k = 1; k <= data.m + 3; ++k) {
    Integer count = 0;
    enumerate_fibre(data, k, [&](long) { count += 1; });
    samples.emplace_back(k, Rational(count));
  }
  Poly fitted = poly_fit_univariate(samples, data.m + 1);
  if (fitted.degree() != data.m)
    throw std::logic_error("fibre section counts violate the expected degree");
  return fitted;
}

Poly fibre_weight_poly(const TestConfiguration& tc) {
  const FibreData data = fibre_data(tc);
  std::vector<std::pair<long, Rational>> samples;
  for (long k = 1; k <= data.m + 4; ++k) {
    Integer total = 0;
    enumerate_fibre(data, k, [&](long w) { total += w; });
    samples.emplace_back(k, Rational(total));
  }
  return poly_fit_univariate(samples, data.m + 2);
}

Poly tc_hilbert_poly_from_model(const TestConfiguration& tc) {
  if (tc.weights) return fibre_hilbert_poly(tc);
  if (tc.model->dimension() != 2)
    throw std::invalid_argument(
        "model-read section counts are implemented for one-dimensional fibres only");
  const Rational deg = intersect(*tc.model, {tc.polarization, tc.fibre_slice});
  return Poly(std::vector<Rational>{Rational(1), deg});
}

Poly tc_weight_poly_via_chi(const TestConfiguration& tc) {
  if (tc.model->dimension() != 2)
    throw std::invalid_argument(
        "Euler-characteristic weight route is implemented for two-dimensional families");
  const DivisorClass K = tc.model->canonical();
  const Rational self = intersect(*tc.model, {tc.polarization, tc.polarization});
  const Rational with_K = intersect(*tc.model, {tc.polarization, K});
  // Rational surface: chi(D) = D.(D - K)/2 + 1.
  Poly chi(std::vector<Rational>{Rational(1), -with_K / 2, self / 2});
  return chi - tc_hilbert_poly_from_model(tc);
}

}  // namespace kfib
