#include "gtflow/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace gtflow {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial r(nvars);
  r.add_term(Exponents(nvars, 0), c);
  return r;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Exponents e(nvars, 0);
  e.at(i) = 1;
  return monomial(std::move(e));
}

Polynomial Polynomial::monomial(Exponents e, const Rational& c) {
  Polynomial r(static_cast<int>(e.size()));
  r.add_term(e, c);
  return r;
}

Polynomial Polynomial::univariate(int nvars, int var, const std::vector<Rational>& coeffs) {
  Polynomial r(nvars);
  Exponents e(nvars, 0);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    e.at(var) = static_cast<int>(m);
    r.add_term(e, coeffs[m]);
  }
  return r;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw DomainError("polynomials in different numbers of variables");
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial r(a.nvars_);
  Polynomial::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int k = 0; k < a.nvars_; ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(i) == 0) continue;
    Exponents d = e;
    --d[i];
    r.add_term(d, c * e[i]);
  }
  return r;
}

Polynomial Polynomial::divide_by_difference(int i, int j) const {
  if (i == j) throw DomainError("divide_by_difference: identical variables");
  Polynomial quotient(nvars_);
  Polynomial rem = *this;
  // Repeatedly cancel the term with the largest x_i-degree.
  while (!rem.is_zero()) {
    auto lead = rem.terms_.begin();
    for (auto it = rem.terms_.begin(); it != rem.terms_.end(); ++it)
      if (it->first[i] > lead->first[i]) lead = it;
    if (lead->first[i] == 0) throw DomainError("polynomial is not divisible by (x_i - x_j)");
    Exponents q = lead->first;
    --q[i];
    const Rational c = lead->second;
    quotient.add_term(q, c);
    Exponents qi = q, qj = q;
    ++qi[i];
    ++qj[j];
    rem.add_term(qi, -c);
    rem.add_term(qj, c);
  }
  return quotient;
}

Polynomial Polynomial::swapped(int i, int j) const {
  Polynomial r(nvars_);
  for (const auto& [key, c] : terms_) {
    Exponents e = key;
    std::swap(e.at(i), e.at(j));
    r.add_term(e, c);
  }
  return r;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw DomainError("evaluate: wrong number of coordinates");
  Rational s(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int k = 0; k < nvars_; ++k)
      for (int m = 0; m < e[k]; ++m) t *= x[k];
    s += t;
  }
  return s;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw DomainError("evaluate: wrong number of coordinates");
  double s = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int k = 0; k < nvars_; ++k) t *= std::pow(x[k], e[k]);
    s += t;
  }
  return s;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    os << (first ? "" : " + ") << c.get_str();
    for (int k = 0; k < nvars_; ++k)
      if (e[k]) os << "*x" << k + 1 << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    first = false;
  }
  return os.str();
}

Polynomial vandermonde_polynomial(int p) {
  Polynomial v = Polynomial::constant(p, Rational(1));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j) v = v * (Polynomial::variable(p, i) - Polynomial::variable(p, j));
  return v;
}

std::vector<Polynomial> monomials_up_to(int p, int max_degree) {
  std::vector<Polynomial> out;
  Polynomial::Exponents e(p, 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == p) {
      out.push_back(Polynomial::monomial(e));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[k] = v;
      rec(k + 1, left - v);
    }
    e[k] = 0;
  };
  rec(0, max_degree);
  return out;
}

}  // namespace gtflow
