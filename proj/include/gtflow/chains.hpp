#pragma once

// Finite-N dynamics: cotransitions, up transitions, the two-diagonal matrix v_N,
// the determinantal transition formulas, up-down kernels and exact samplers.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "gtflow/ensembles.hpp"
#include "gtflow/gt_core.hpp"
#include "gtflow/numeric.hpp"
#include "gtflow/params.hpp"
#include "gtflow/rng.hpp"

namespace gtflow {

/// p_down(lambda | mu) = Dim(lambda)/Dim(mu) if lambda < mu, else 0.
Rational cotransition(const Signature& lambda, const Signature& mu);

/// Product formula for p_up(X -> X'), X in box (N, p), X' in box (N+1, p):
/// V(X')/V(X) prod_{stay} (z'+N-x_i) prod_{move} (w'+1+x_i) / (z'+w'+N+1)_p.
Rational up_transition_exact(const ModelParams& params, int N, const ParticleConfig& X, const ParticleConfig& Xp);
double up_transition(const ModelParams& params, int N, const ParticleConfig& X, const ParticleConfig& Xp);

/// The generic definition M_{N+1}(mu) p_down(lambda|mu) / M_N(lambda) through the bijection.
Rational up_transition_generic(const ModelParams& params, const ParticleConfig& X, const ParticleConfig& Xp);

/// Cotransition in particle coordinates: X' in box (N, p), X in box (N+1, p):
/// V(X')/V(X) prod_{stay} (N+p-x_i) prod_{move down} x_i / (N+1)_p.
Rational down_transition_exact(const ParticleConfig& Xp, const ParticleConfig& X);

/// c_i^N = sqrt((1 - i/(p+N)) (1 + i/(w'+z'+N+1))).
double c_coeff(const ModelParams& params, int N, int i);
Rational c_squared_exact(const ModelParams& params, int N, int i);
/// log (c_i^N)^2, accurate for large N.
double log_c_squared(const ModelParams& params, int N, int i);

/// (N+p) x (N+p+1) two-diagonal matrix with
/// v(x,x) = sqrt((z'+N-x)(p+N-x) / D), v(x,x+1) = sqrt((w'+x+1)(x+1) / D), D = (p+N)(w'+z'+N+1).
Eigen::MatrixXd matrix_vN(const ModelParams& params, int N);

/// F_N^T C_N F_{N+1} assembled from the Hahn orthonormal functions.
Eigen::MatrixXd spectral_vN(const ModelParams& params, int N);

/// Determinantal up transition sqrt(P_{N+1}(X')/P_N(X)) det[v_N(x_i, x'_j)] / prod_{i<p} c_i^N.
SignedSqrt up_transition_determinantal_exact(const ModelParams& params, int N, const ParticleConfig& X,
                                             const ParticleConfig& Xp);
double up_transition_determinantal(const ModelParams& params, int N, const ParticleConfig& X,
                                   const ParticleConfig& Xp);

/// Determinantal cotransition sqrt(P_N(X')/P_{N+1}(X)) det[v_N(x'_i, x_j)] / prod c_i^N,
/// X' in box (N, p), X in box (N+1, p).
SignedSqrt down_transition_determinantal_exact(const ModelParams& params, int N, const ParticleConfig& Xp,
                                               const ParticleConfig& X);
double down_transition_determinantal(const ModelParams& params, int N, const ParticleConfig& Xp,
                                     const ParticleConfig& X);

/// Site-level kernel w_{N,k} with the powers (c_i^N)^{2k}, i < p, it is normalized by.
struct UpDownKernel {
  int N = 0;
  int p = 0;
  double z_prime = 0;
  double w_prime = 0;
  long k = 0;
  Eigen::MatrixXd matrix;
  std::vector<double> c_powers;
};

/// k = 1 from u_N = v_N v_N^T.
UpDownKernel updown_step_kernel(const ModelParams& params, int N);

/// F_N^T diag((c_i^N)^{2k}) F_N.
UpDownKernel updown_k_step_kernel(const ModelParams& params, int N, long k);

/// Configuration-level transition matrix sqrt(P(X')/P(X)) det[w(x_i, x'_j)] / prod c^{2k}
/// over configs_in_box(N, p).
Eigen::MatrixXd config_transition_matrix(const ModelParams& params, const UpDownKernel& kernel);

/// Exact up-down kernels for integral z', w'. The site kernel u_N^k factors as
/// scale^k S (core W)^{k-1} core S with S = diag(sqrt(w_N)), W = diag(w_N), so every
/// configuration-level transition is rational.
class ExactUpDown {
 public:
  ExactUpDown(ModelParams params, int N);

  const std::vector<ParticleConfig>& configs() const { return configs_; }

  /// Prob(X -> X') after k up-down steps from the Cauchy-Binet determinant.
  Rational transition(const ParticleConfig& X, const ParticleConfig& Xp, int k) const;

  /// sum_Y p_down(X'|Y) p_up(Y|X) by direct enumeration of Y.
  Rational composed_transition(const ParticleConfig& X, const ParticleConfig& Xp) const;

  /// Dense matrix over configs() of transition(., ., k).
  std::vector<std::vector<Rational>> matrix(int k) const;

 private:
  const std::vector<Rational>& inner_power(int k) const;

  ModelParams params_;
  int N_;
  std::vector<ParticleConfig> configs_;
  std::vector<Rational> weights_;
  Rational scale_;
  std::vector<Rational> c_sq_;
  // core matrices (core W)^{k-1} core, row-major, cached by k.
  mutable std::vector<std::vector<Rational>> powers_;
};

/// Exact determinant by Gaussian elimination.
Rational determinant(std::vector<std::vector<Rational>> m);

// ---------------------------------------------------------------------------
// Samplers

/// Sampler state: configuration, number of steps taken, and the RNG stream position.
struct ChainState {
  ParticleConfig config;
  long time = 0;
  std::uint64_t rng_position = 0;
};

/// One up move in place: x (level N) -> level N+1.
void up_step(const ModelParams& params, int N, std::vector<int>& x, RngStream& rng);
/// One down move in place: x (level N+1) -> level N.
void down_step(int N, std::vector<int>& x, RngStream& rng);

/// X(0), ..., X(N_target) of the up chain started from the empty signature.
std::vector<ParticleConfig> sample_up_chain(const ModelParams& params, int N_target, RngStream& rng);

/// Exact draw from P_N (the level-N marginal of the up chain).
ParticleConfig sample_stationary(const ModelParams& params, int N, RngStream& rng);

/// Trajectory of `steps` up-down steps at level N; init = nullopt draws it from P_N.
std::vector<ParticleConfig> sample_updown_trajectory(const ModelParams& params, int N, long steps, RngStream& rng,
                                                     const std::optional<ParticleConfig>& init = std::nullopt);

/// Advances `state` by `steps` up-down steps.
void advance(const ModelParams& params, ChainState& state, long steps, RngStream& rng);

// ---------------------------------------------------------------------------
// Dumps

/// trajectory_id,step,particle_index,position
void write_trajectory_csv_header(std::ostream& os);
void write_trajectory_csv(std::ostream& os, std::uint64_t trajectory_id, const std::vector<ParticleConfig>& path);

/// Dense kernel as CSV (one row per line) and its JSON sidecar {N, p, zPrime, wPrime, k}.
void write_kernel_csv(std::ostream& os, const UpDownKernel& kernel);
nlohmann::json kernel_metadata(const UpDownKernel& kernel);

}  // namespace gtflow
