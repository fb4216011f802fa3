#pragma once

#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kfib/rational.hpp"

namespace kfib {

// Thrown by poly_fit when the sample set contradicts every polynomial within
// the requested degree bounds (the linear system is infeasible).
struct InconsistentSamples : std::runtime_error {
  explicit InconsistentSamples(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by poly_fit when the sample set does not determine the coefficients
// (too few points, or degenerate point placement).
struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

// Univariate polynomial with exact rational coefficients, stored dense in
// ascending order with no trailing zeros. The zero polynomial has degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rational constant);
  explicit Poly(std::vector<Rational> ascending_coefficients);
  Poly(std::initializer_list<Rational> ascending_coefficients)
      : Poly(std::vector<Rational>(ascending_coefficients)) {}

  static Poly variable();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  // Coefficient of x^i; zero outside the stored range.
  Rational coefficient(int i) const;
  Rational leading_coefficient() const;

  Rational operator()(const Rational& x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& s) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return c_ == o.c_; }

  // Exact Euclidean division: returns (quotient, remainder) with
  // *this == quotient * divisor + remainder and deg remainder < deg divisor.
  std::pair<Poly, Poly> divmod(const Poly& divisor) const;

  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

inline Poly operator*(const Rational& s, const Poly& p) { return p * s; }

// Polynomial in two variables (j, k) with exact rational coefficients,
// stored sparse; zero coefficients are never stored.
class BivariatePolynomial {
 public:
  BivariatePolynomial() = default;

  static BivariatePolynomial term(int dj, int dk, const Rational& coeff);

  // Degree in each variable; -1 for the zero polynomial.
  int degree_j() const;
  int degree_k() const;
  bool is_zero() const { return c_.empty(); }

  Rational coefficient(int dj, int dk) const;
  void add_term(int dj, int dk, const Rational& coeff);

  BivariatePolynomial operator+(const BivariatePolynomial& o) const;
  BivariatePolynomial operator-(const BivariatePolynomial& o) const;
  BivariatePolynomial operator*(const BivariatePolynomial& o) const;
  bool operator==(const BivariatePolynomial& o) const { return c_ == o.c_; }

  Rational operator()(const Rational& j, const Rational& k) const;

  // Coefficient of k^dk, as a polynomial in j.
  Poly coefficient_of_k(int dk) const;
  // Specialize j to a number, leaving a polynomial in k.
  Poly at_j(const Rational& j) const;

  const std::map<std::pair<int, int>, Rational>& terms() const { return c_; }

  std::string str() const;

 private:
  std::map<std::pair<int, int>, Rational> c_;
};

struct Sample {
  long j = 0;
  long k = 0;
  Rational value;
};

// Exact interpolation: find the unique polynomial with deg_j <= deg_j_bound,
// deg_k <= deg_k_bound matching every sample. Exact fraction-free
// elimination over the integers (denominators cleared per row, eliminations
// by cross-multiplication), so there is no rounding anywhere. Overdetermined
// sample sets are welcome: extra rows are checked for consistency and
// a contradiction raises InconsistentSamples; an underdetermining set raises
// RankDeficient.
BivariatePolynomial poly_fit(const std::vector<Sample>& samples, int deg_j_bound,
                             int deg_k_bound);

// One-variable cousin used for fibre computations: samples are (k, value).
Poly poly_fit_univariate(const std::vector<std::pair<long, Rational>>& samples,
                         int degree_bound);

}  // namespace kfib
