#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gtflow {

using Integer = mpz_class;
using Rational = mpq_class;

enum class Mode { exact, floating };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model parameters or configuration.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (box mismatch, boundary point, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series could not be truncated below the requested tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

Integer factorial(unsigned n);

// Gamma(n) for a positive integer n, i.e. (n-1)!.
Integer gamma_int(long n);

// Exact conversion; every finite double is a dyadic rational.
inline Rational to_rational(double v) { return Rational(v); }

inline double to_double(const Rational& q) { return q.get_d(); }

// num/den in canonical form (mpq_class(num, den) leaves the fraction unreduced).
Rational ratio(long num, long den);

bool is_integer(double v);

bool is_perfect_square(const Rational& q);

// Exact square root of a perfect-square rational; throws DomainError otherwise.
Rational exact_sqrt(const Rational& q);

// sign * sqrt(square) with square >= 0, kept exact. Products of square roots of
// rationals stay in this form, so identities involving them can be checked in
// squared form plus a sign comparison.
struct SignedSqrt {
  int sign = 0;
  Rational square = 0;

  static SignedSqrt from_rational(const Rational& q) { return {sgn(q), q * q}; }
  static SignedSqrt sqrt_of(const Rational& q);

  SignedSqrt operator*(const SignedSqrt& o) const { return {sign * o.sign, square * o.square}; }
  SignedSqrt operator/(const SignedSqrt& o) const;

  bool equals(const Rational& q) const { return sign == sgn(q) && (sign == 0 || square == q * q); }
  double to_double() const;
};

}  // namespace gtflow
