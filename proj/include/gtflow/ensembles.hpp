#pragma once

// Probability measures: the level-N measure on signatures for integer (z, w),
// its particle pushforward P_N, the Hahn weight w_N, and the limit density on
// the Weyl chamber.

#include <json.hpp>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gtflow/gt_core.hpp"
#include "gtflow/numeric.hpp"
#include "gtflow/params.hpp"

namespace gtflow {

/// w_N(x) = Gamma(z'+N-x) Gamma(w'+x+1) / (Gamma(N+p-x) Gamma(x+1)), 0 <= x <= N+p-1.
/// The exact version needs integral z', w'.
Rational weight_wN_exact(const ModelParams& params, int N, int x);
double log_weight_wN(const ModelParams& params, int N, int x);
double weight_wN(const ModelParams& params, int N, int x);

/// P_N(X) = Z_N V(X)^2 prod w_N(x_i) on configurations in the box (N, p).
class DiscreteEnsemble {
 public:
  DiscreteEnsemble(ModelParams params, int N);

  const ModelParams& params() const { return params_; }
  int N() const { return N_; }

  // Closed-form normalization.
  Rational Z_exact() const;
  double log_Z() const;

  // 1 / sum_X V^2 prod w_N by enumeration.
  Rational Z_bruteforce_exact() const;

  Rational prob_exact(const ParticleConfig& X) const;
  double log_prob(const ParticleConfig& X) const;
  double prob(const ParticleConfig& X) const;

 private:
  void check_box(const ParticleConfig& X) const;
  void require_integral() const;

  ModelParams params_;
  int N_;
};

/// The level-N measure for an integer quadruple (k, l, z', w') with k+l >= 0,
/// z'-k > -1, w'-l > -1. Masses are exact rationals; 1/Gamma vanishes at the poles.
class GeneralZWMeasure {
 public:
  GeneralZWMeasure(int k, int l, int z_prime, int w_prime, int N);

  int N() const { return N_; }

  Rational mass(const Signature& lambda) const;

  /// Every signature of level N with non-zero mass, in increasing order.
  std::vector<Signature> support() const;

  /// Parameters after the shift (k+n, l-n, z'+n, w'-n).
  GeneralZWMeasure shifted(int n) const;

 private:
  int k_, l_, zp_, wp_, N_;
  Rational inv_S_;
};

/// M_N^{p,0,z',w'}(lambda) (exact).
Rational prob_MN(const ModelParams& params, const Signature& lambda);

/// rho(X) = B V(X)^2 prod x_i^{w'} (1-x_i)^{z'-p} on the ordered chamber.
class LimitEnsemble {
 public:
  explicit LimitEnsemble(ModelParams params, int quadrature_nodes = 0);

  const ModelParams& params() const { return params_; }
  double B() const { return B_; }
  double log_B() const { return log_B_; }
  int quadrature_nodes() const { return nodes_; }

  /// Zero unless 0 <= x_1 < ... < x_p <= 1.
  double density(std::span<const double> X) const;

  /// Integral of the density over the chamber, by symmetrized cube quadrature.
  double total_mass(int nodes) const;

 private:
  ModelParams params_;
  int nodes_;
  double log_B_;
  double B_;
};

double density_rho(const LimitEnsemble& ensemble, std::span<const double> X);

/// Nearest lattice site with ties rounded up.
int round_half_up(double v);

/// ((N+p-1)^p P_N(round((N+p-1) X)), rho(X)); throws DomainError when two
/// coordinates round to the same site.
std::pair<double, double> discrete_to_continuum_check(const DiscreteEnsemble& discrete,
                                                      const LimitEnsemble& limit, std::span<const double> X);

/// {p, zPrime, wPrime, N?, mode}
nlohmann::json params_to_json(const ModelParams& params, std::optional<int> N = std::nullopt);

}  // namespace gtflow
