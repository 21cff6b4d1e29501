#pragma once

// Exact multivariate polynomials over the rationals in the monomial basis.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gtflow/numeric.hpp"

namespace gtflow {

class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nvars = 1) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);
  static Polynomial monomial(Exponents e, const Rational& c = Rational(1));
  /// sum_m coeffs[m] x_var^m
  static Polynomial univariate(int nvars, int var, const std::vector<Rational>& coeffs);

  int nvars() const { return nvars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial derivative(int i) const;

  /// Exact quotient by (x_i - x_j); throws DomainError when the division leaves a remainder.
  Polynomial divide_by_difference(int i, int j) const;

  /// Swap of two variables.
  Polynomial swapped(int i, int j) const;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  std::string str() const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  void check_compatible(const Polynomial& o) const;

  int nvars_;
  std::map<Exponents, Rational> terms_;
};

/// prod_{i>j} (x_i - x_j) in p variables.
Polynomial vandermonde_polynomial(int p);

/// Every monomial in p variables of total degree <= max_degree.
std::vector<Polynomial> monomials_up_to(int p, int max_degree);

}  // namespace gtflow
