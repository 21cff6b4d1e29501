#include "gtflow/numeric.hpp"

#include <cmath>

namespace gtflow {

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

Mode mode_from_string(const std::string& name) {
  if (name == "exact") return Mode::exact;
  if (name == "float") return Mode::floating;
  throw ParameterError("unknown arithmetic mode '" + name + "' (expected exact|float)");
}

Rational ratio(long num, long den) {
  if (den == 0) throw DomainError("ratio: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer gamma_int(long n) {
  if (n < 1) throw DomainError("gamma_int: pole at non-positive integer " + std::to_string(n));
  return factorial(static_cast<unsigned>(n - 1));
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

bool is_perfect_square(const Rational& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) != 0 && mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

Rational exact_sqrt(const Rational& q) {
  if (!is_perfect_square(q)) throw DomainError("exact_sqrt: radicand is not a perfect square");
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  Rational r(num, den);
  r.canonicalize();
  return r;
}

SignedSqrt SignedSqrt::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw DomainError("SignedSqrt: negative radicand");
  return {sgn(q), q};
}

SignedSqrt SignedSqrt::operator/(const SignedSqrt& o) const {
  if (o.sign == 0) throw DomainError("SignedSqrt: division by zero");
  return {sign * o.sign, square / o.square};
}

double SignedSqrt::to_double() const { return sign * std::sqrt(square.get_d()); }

}  // namespace gtflow
