#include "kfib/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace kfib {

Poly::Poly(Rational constant) {
  if (constant != 0) c_.push_back(std::move(constant));
}

Poly::Poly(std::vector<Rational> ascending_coefficients) : c_(std::move(ascending_coefficients)) {
  trim();
}

Poly Poly::variable() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coefficient(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<size_t>(i)];
}

Rational Poly::leading_coefficient() const {
  if (c_.empty()) return Rational(0);
  return c_.back();
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> out(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
  return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  std::vector<Rational> out = c_;
  for (auto& v : out) v = -v;
  return Poly(std::move(out));
}

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly();
  std::vector<Rational> out(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(out));
}

Poly Poly::operator*(const Rational& s) const {
  std::vector<Rational> out = c_;
  for (auto& v : out) v *= s;
  return Poly(std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rational> rem = c_;
  const int dd = divisor.degree();
  const Rational lead = divisor.leading_coefficient();
  std::vector<Rational> quot;
  int dr = static_cast<int>(rem.size()) - 1;
  while (dr >= 0 && rem[static_cast<size_t>(dr)] == 0) --dr;
  if (dr - dd >= 0) quot.assign(static_cast<size_t>(dr - dd + 1), Rational(0));
  while (dr >= dd) {
    const Rational q = rem[static_cast<size_t>(dr)] / lead;
    quot[static_cast<size_t>(dr - dd)] = q;
    for (int i = 0; i <= dd; ++i)
      rem[static_cast<size_t>(dr - dd + i)] -= q * divisor.coefficient(i);
    --dr;
    while (dr >= 0 && rem[static_cast<size_t>(dr)] == 0) --dr;
  }
  rem.resize(static_cast<size_t>(dr + 1));
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& v = c_[static_cast<size_t>(i)];
    if (v == 0) continue;
    if (!first) out << (v > 0 ? " + " : " - ");
    else if (v < 0) out << "-";
    first = false;
    const Rational a = v > 0 ? v : Rational(-v);
    if (i == 0 || a != 1) out << a.str();
    if (i > 0) {
      if (a != 1) out << "*";
      out << var;
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

BivariatePolynomial BivariatePolynomial::term(int dj, int dk, const Rational& coeff) {
  BivariatePolynomial p;
  p.add_term(dj, dk, coeff);
  return p;
}

int BivariatePolynomial::degree_j() const {
  int d = -1;
  for (const auto& [e, v] : c_) d = std::max(d, e.first);
  return d;
}

int BivariatePolynomial::degree_k() const {
  int d = -1;
  for (const auto& [e, v] : c_) d = std::max(d, e.second);
  return d;
}

Rational BivariatePolynomial::coefficient(int dj, int dk) const {
  auto it = c_.find({dj, dk});
  return it == c_.end() ? Rational(0) : it->second;
}

void BivariatePolynomial::add_term(int dj, int dk, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = c_.try_emplace({dj, dk}, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) c_.erase(it);
  }
}

BivariatePolynomial BivariatePolynomial::operator+(const BivariatePolynomial& o) const {
  BivariatePolynomial out = *this;
  for (const auto& [e, v] : o.c_) out.add_term(e.first, e.second, v);
  return out;
}

BivariatePolynomial BivariatePolynomial::operator-(const BivariatePolynomial& o) const {
  BivariatePolynomial out = *this;
  for (const auto& [e, v] : o.c_) out.add_term(e.first, e.second, -v);
  return out;
}

BivariatePolynomial BivariatePolynomial::operator*(const BivariatePolynomial& o) const {
  BivariatePolynomial out;
  for (const auto& [e1, v1] : c_)
    for (const auto& [e2, v2] : o.c_)
      out.add_term(e1.first + e2.first, e1.second + e2.second, v1 * v2);
  return out;
}

Rational BivariatePolynomial::operator()(const Rational& j, const Rational& k) const {
  Rational acc = 0;
  for (const auto& [e, v] : c_) {
    Rational t = v;
    for (int a = 0; a < e.first; ++a) t *= j;
    for (int b = 0; b < e.second; ++b) t *= k;
    acc += t;
  }
  return acc;
}

Poly BivariatePolynomial::coefficient_of_k(int dk) const {
  std::vector<Rational> coeffs;
  for (const auto& [e, v] : c_) {
    if (e.second != dk) continue;
    if (static_cast<int>(coeffs.size()) <= e.first) coeffs.resize(static_cast<size_t>(e.first) + 1, Rational(0));
    coeffs[static_cast<size_t>(e.first)] = v;
  }
  return Poly(std::move(coeffs));
}

Poly BivariatePolynomial::at_j(const Rational& j) const {
  std::vector<Rational> coeffs;
  for (const auto& [e, v] : c_) {
    Rational t = v;
    for (int a = 0; a < e.first; ++a) t *= j;
    if (static_cast<int>(coeffs.size()) <= e.second) coeffs.resize(static_cast<size_t>(e.second) + 1, Rational(0));
    coeffs[static_cast<size_t>(e.second)] += t;
  }
  return Poly(std::move(coeffs));
}

std::string BivariatePolynomial::str() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, v] : c_) {
    if (!first) out << (v > 0 ? " + " : " - ");
    else if (v < 0) out << "-";
    first = false;
    const Rational a = v > 0 ? v : Rational(-v);
    bool wrote = false;
    if (a != 1 || (e.first == 0 && e.second == 0)) {
      out << a.str();
      wrote = true;
    }
    if (e.first > 0) {
      if (wrote) out << "*";
      out << "j";
      if (e.first > 1) out << "^" << e.first;
      wrote = true;
    }
    if (e.second > 0) {
      if (wrote) out << "*";
      out << "k";
      if (e.second > 1) out << "^" << e.second;
    }
  }
  return out.str();
}

namespace {

Integer integer_pow(long base, int exp) {
  Integer out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Exact linear solve of rows * x = rhs by fraction-free Gaussian elimination.
// Returns the unique solution; throws RankDeficient / InconsistentSamples.
std::vector<Rational> solve_exact(std::vector<std::vector<Integer>> m, size_t cols,
                                  const std::string& what) {
  const size_t rows = m.size();
  std::vector<size_t> pivot_row_of_col(cols, SIZE_MAX);
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = SIZE_MAX;
    for (size_t r = rank; r < rows; ++r) {
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == SIZE_MAX) continue;
    std::swap(m[rank], m[pivot]);
    // Eliminate below by cross-multiplication; contents stay integral.
    for (size_t r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      const Integer a = m[rank][col];
      const Integer b = m[r][col];
      for (size_t c2 = 0; c2 < cols + 1; ++c2) m[r][c2] = m[r][c2] * a - m[rank][c2] * b;
      // Tame growth: strip the content of the row.
      Integer g = 0;
      for (size_t c2 = 0; c2 < cols + 1; ++c2) g = boost::multiprecision::gcd(g, m[r][c2]);
      if (g > 1)
        for (size_t c2 = 0; c2 < cols + 1; ++c2) m[r][c2] /= g;
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }
  for (size_t r = rank; r < rows; ++r)
    if (m[r][cols] != 0)
      throw InconsistentSamples(what + ": samples admit no polynomial within the degree bounds");
  if (rank < cols)
    throw RankDeficient(what + ": samples determine only " + std::to_string(rank) + " of " +
                        std::to_string(cols) + " coefficients");
  std::vector<Rational> x(cols, Rational(0));
  for (size_t col = cols; col-- > 0;) {
    const size_t r = pivot_row_of_col[col];
    Rational acc = Rational(m[r][cols]);
    for (size_t c2 = col + 1; c2 < cols; ++c2) acc -= Rational(m[r][c2]) * x[c2];
    x[col] = acc / Rational(m[r][col]);
  }
  return x;
}

}  // namespace

BivariatePolynomial poly_fit(const std::vector<Sample>& samples, int deg_j_bound,
                             int deg_k_bound) {
  if (deg_j_bound < 0 || deg_k_bound < 0)
    throw std::invalid_argument("poly_fit: negative degree bound");
  const size_t cols = static_cast<size_t>(deg_j_bound + 1) * static_cast<size_t>(deg_k_bound + 1);
  if (samples.size() < cols)
    throw RankDeficient("poly_fit: " + std::to_string(samples.size()) + " samples for " +
                        std::to_string(cols) + " coefficients");
  std::vector<std::vector<Integer>> m(samples.size(), std::vector<Integer>(cols + 1, Integer(0)));
  for (size_t r = 0; r < samples.size(); ++r) {
    const auto& s = samples[r];
    const Integer den = denominator(s.value);
    size_t c = 0;
    for (int dj = 0; dj <= deg_j_bound; ++dj)
      for (int dk = 0; dk <= deg_k_bound; ++dk)
        m[r][c++] = integer_pow(s.j, dj) * integer_pow(s.k, dk) * den;
    m[r][cols] = numerator(s.value);
  }
  const std::vector<Rational> x = solve_exact(std::move(m), cols, "poly_fit");
  BivariatePolynomial out;
  size_t c = 0;
  for (int dj = 0; dj <= deg_j_bound; ++dj)
    for (int dk = 0; dk <= deg_k_bound; ++dk) out.add_term(dj, dk, x[c++]);
  return out;
}

Poly poly_fit_univariate(const std::vector<std::pair<long, Rational>>& samples,
                         int degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("poly_fit: negative degree bound");
  const size_t cols = static_cast<size_t>(degree_bound) + 1;
  if (samples.size() < cols)
    throw RankDeficient("poly_fit: " + std::to_string(samples.size()) + " samples for " +
                        std::to_string(cols) + " coefficients");
  std::vector<std::vector<Integer>> m(samples.size(), std::vector<Integer>(cols + 1, Integer(0)));
  for (size_t r = 0; r < samples.size(); ++r) {
    const Integer den = denominator(samples[r].second);
    for (size_t c = 0; c < cols; ++c)
      m[r][c] = integer_pow(samples[r].first, static_cast<int>(c)) * den;
    m[r][cols] = numerator(samples[r].second);
  }
  std::vector<Rational> x = solve_exact(std::move(m), cols, "poly_fit");
  return Poly(std::move(x));
}

}  // namespace kfib
