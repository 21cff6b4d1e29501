#pragma once

#include "gtflow/numeric.hpp"

namespace gtflow {

/// Global parameter record (p, z', w', arithmetic mode) of the coherent system
/// M_N^{p,0,z',w'}. Checked at construction: p >= 1, z' > p - 1, w' > -1, and
/// integral z', w' in exact mode.
class ModelParams {
 public:
  ModelParams(int p, double z_prime, double w_prime, Mode mode = Mode::floating);

  int p() const { return p_; }
  double z_prime() const { return z_prime_; }
  double w_prime() const { return w_prime_; }
  Mode mode() const { return mode_; }

  // Exact copies of the (dyadic) double parameters.
  Rational z_prime_exact() const { return to_rational(z_prime_); }
  Rational w_prime_exact() const { return to_rational(w_prime_); }

  // Jacobi exponents of the limit weight x^{w'} (1-x)^{z'-p}: alpha = z'-p, beta = w'.
  double jacobi_alpha() const { return z_prime_ - p_; }
  double jacobi_beta() const { return w_prime_; }

  ModelParams with_mode(Mode mode) const { return ModelParams(p_, z_prime_, w_prime_, mode); }

  bool operator==(const ModelParams&) const = default;

 private:
  int p_;
  double z_prime_;
  double w_prime_;
  Mode mode_;
};

}  // namespace gtflow
