#include "gtflow/chains.hpp"

#include <cmath>
#include <string>

#include "gtflow/orthopoly.hpp"

namespace gtflow {

namespace {

void check_adjacent(int N, const ParticleConfig& lower, const ParticleConfig& upper) {
  if (lower.N() != N || upper.N() != N + 1 || lower.p() != upper.p())
    throw DomainError("transition needs configurations in boxes (" + std::to_string(N) + ",p) and (" +
                      std::to_string(N + 1) + ",p)");
}

template <class T>
T vandermonde_of(std::span<const int> pts) {
  T v = T(1);
  for (std::size_t j = 1; j < pts.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v *= T(pts[j] - pts[i]);
  return v;
}

Rational scale_exact(const ModelParams& params, int N) {
  return Rational(1) / (Rational(params.p() + N) * (params.w_prime_exact() + params.z_prime_exact() + N + 1));
}

// Entries of the integer-valued two-diagonal core: T(x,x) = z'+N-x, T(x,x+1) = w'+1+x.
Rational core_T(const ModelParams& params, int N, int x, int y) {
  if (y == x) return params.z_prime_exact() + N - x;
  if (y == x + 1) return params.w_prime_exact() + 1 + x;
  return Rational(0);
}

Rational det_T_sub(const ModelParams& params, int N, std::span<const int> rows, std::span<const int> cols) {
  const std::size_t p = rows.size();
  std::vector<std::vector<Rational>> m(p, std::vector<Rational>(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) m[i][j] = core_T(params, N, rows[i], cols[j]);
  return determinant(std::move(m));
}

double det_sub(const Eigen::MatrixXd& a, std::span<const int> rows, std::span<const int> cols) {
  const int p = static_cast<int>(rows.size());
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = a(rows[i], cols[j]);
  return m.determinant();
}

Rational c_sq_product(const ModelParams& params, int N) {
  Rational prod(1);
  for (int i = 0; i < params.p(); ++i) prod *= c_squared_exact(params, N, i);
  return prod;
}

double log_c_sq_product(const ModelParams& params, int N) {
  double v = 0;
  for (int i = 0; i < params.p(); ++i) v += log_c_squared(params, N, i);
  return v;
}

}  // namespace

Rational cotransition(const Signature& lambda, const Signature& mu) {
  if (!interlaces(lambda, mu)) return Rational(0);
  return Rational(dim(lambda)) / Rational(dim(mu));
}

Rational up_transition_exact(const ModelParams& params, int N, const ParticleConfig& X, const ParticleConfig& Xp) {
  check_adjacent(N, X, Xp);
  if (!particles_interlace(X, Xp)) return Rational(0);
  const Rational zp = params.z_prime_exact(), wp = params.w_prime_exact();
  Rational v = Rational(vandermonde(Xp)) / Rational(vandermonde(X));
  for (int i = 0; i < X.p(); ++i) v *= (Xp[i] == X[i]) ? Rational(zp + N - X[i]) : Rational(wp + 1 + X[i]);
  return v / pochhammer(zp + wp + N + 1, X.p());
}

double up_transition(const ModelParams& params, int N, const ParticleConfig& X, const ParticleConfig& Xp) {
  check_adjacent(N, X, Xp);
  if (!particles_interlace(X, Xp)) return 0.0;
  const double zp = params.z_prime(), wp = params.w_prime();
  double v = vandermonde_of<double>(Xp.points()) / vandermonde_of<double>(X.points());
  for (int i = 0; i < X.p(); ++i) v *= (Xp[i] == X[i]) ? zp + N - X[i] : wp + 1 + X[i];
  return v / pochhammer(zp + wp + N + 1, X.p());
}

Rational up_transition_generic(const ModelParams& params, const ParticleConfig& X, const ParticleConfig& Xp) {
  const Signature lambda = from_particles(X);
  const Signature mu = from_particles(Xp);
  const Rational down = cotransition(lambda, mu);
  if (down == 0) return down;
  return prob_MN(params, mu) * down / prob_MN(params, lambda);
}

Rational down_transition_exact(const ParticleConfig& Xp, const ParticleConfig& X) {
  const int N = Xp.N();
  check_adjacent(N, Xp, X);
  if (!particles_interlace(Xp, X)) return Rational(0);
  const int p = X.p();
  Rational v = Rational(vandermonde(Xp)) / Rational(vandermonde(X));
  for (int i = 0; i < p; ++i) v *= (Xp[i] == X[i]) ? N + p - X[i] : X[i];
  return v / pochhammer(Rational(N + 1), p);
}

double log_c_squared(const ModelParams& params, int N, int i) {
  const int p = params.p();
  if (i < 0 || i > N + p - 1) throw DomainError("c_coeff: index outside {0..N+p-1}");
  const double s = params.w_prime() + params.z_prime();
  const double K = i * (i + s + 1 - p);
  return std::log1p(-K / ((p + N) * (s + N + 1)));
}

double c_coeff(const ModelParams& params, int N, int i) { return std::exp(0.5 * log_c_squared(params, N, i)); }

Rational c_squared_exact(const ModelParams& params, int N, int i) {
  const int p = params.p();
  if (i < 0 || i > N + p - 1) throw DomainError("c_coeff: index outside {0..N+p-1}");
  const Rational s = params.w_prime_exact() + params.z_prime_exact();
  return (Rational(1) - ratio(i, p + N)) * (Rational(1) + Rational(i) / (s + N + 1));
}

Eigen::MatrixXd matrix_vN(const ModelParams& params, int N) {
  const int p = params.p();
  const int n = N + p;
  const double zp = params.z_prime(), wp = params.w_prime();
  const double D = (p + N) * (wp + zp + N + 1);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n + 1);
  for (int x = 0; x < n; ++x) {
    v(x, x) = std::sqrt((zp + N - x) * (p + N - x) / D);
    v(x, x + 1) = std::sqrt((wp + x + 1) * (x + 1) / D);
  }
  return v;
}

Eigen::MatrixXd spectral_vN(const ModelParams& params, int N) {
  const int n = N + params.p();
  const HahnBasis basis = model_hahn_basis(params, N);
  const Eigen::MatrixXd& F = basis.orthonormal_matrix();
  const HahnBasis basis1 = model_hahn_basis(params, N + 1);
  const Eigen::MatrixXd& F1 = basis1.orthonormal_matrix();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) C(i, i) = c_coeff(params, N, i);
  return F.transpose() * C * F1;
}

SignedSqrt up_transition_determinantal_exact(const ModelParams& params, int N, const ParticleConfig& X,
                                             const ParticleConfig& Xp) {
  check_adjacent(N, X, Xp);
  const int p = params.p();
  const Rational ratio = DiscreteEnsemble(params, N + 1).Z_exact() / DiscreteEnsemble(params, N).Z_exact();
  Rational s = scale_exact(params, N);
  Rational radicand = ratio / c_sq_product(params, N);
  for (int i = 0; i < p; ++i) radicand *= s;
  const Rational front =
      Rational(vandermonde(Xp)) / Rational(vandermonde(X)) * det_T_sub(params, N, X.points(), Xp.points());
  return SignedSqrt::from_rational(front) * SignedSqrt::sqrt_of(radicand);
}

double up_transition_determinantal(const ModelParams& params, int N, const ParticleConfig& X,
                                   const ParticleConfig& Xp) {
  check_adjacent(N, X, Xp);
  const double logP = DiscreteEnsemble(params, N).log_prob(X);
  const double logP1 = DiscreteEnsemble(params, N + 1).log_prob(Xp);
  const double d = det_sub(matrix_vN(params, N), X.points(), Xp.points());
  return std::exp(0.5 * (logP1 - logP) - 0.5 * log_c_sq_product(params, N)) * d;
}

SignedSqrt down_transition_determinantal_exact(const ModelParams& params, int N, const ParticleConfig& Xp,
                                               const ParticleConfig& X) {
  check_adjacent(N, Xp, X);
  const int p = params.p();
  const Rational ratio = DiscreteEnsemble(params, N).Z_exact() / DiscreteEnsemble(params, N + 1).Z_exact();
  Rational radicand = ratio / c_sq_product(params, N);
  const Rational s = scale_exact(params, N);
  for (int i = 0; i < p; ++i) radicand *= s;
  Rational front = Rational(vandermonde(Xp)) / Rational(vandermonde(X)) * det_T_sub(params, N, Xp.points(), X.points());
  for (int i = 0; i < p; ++i) front *= weight_wN_exact(params, N, Xp[i]) / weight_wN_exact(params, N + 1, X[i]);
  return SignedSqrt::from_rational(front) * SignedSqrt::sqrt_of(radicand);
}

double down_transition_determinantal(const ModelParams& params, int N, const ParticleConfig& Xp,
                                     const ParticleConfig& X) {
  check_adjacent(N, Xp, X);
  const double logP = DiscreteEnsemble(params, N).log_prob(Xp);
  const double logP1 = DiscreteEnsemble(params, N + 1).log_prob(X);
  const double d = det_sub(matrix_vN(params, N), Xp.points(), X.points());
  return std::exp(0.5 * (logP - logP1) - 0.5 * log_c_sq_product(params, N)) * d;
}

// ---------------------------------------------------------------------------

UpDownKernel updown_step_kernel(const ModelParams& params, int N) {
  UpDownKernel kernel{N, params.p(), params.z_prime(), params.w_prime(), 1, {}, {}};
  const Eigen::MatrixXd v = matrix_vN(params, N);
  kernel.matrix = v * v.transpose();
  for (int i = 0; i < params.p(); ++i) kernel.c_powers.push_back(std::exp(log_c_squared(params, N, i)));
  return kernel;
}

UpDownKernel updown_k_step_kernel(const ModelParams& params, int N, long k) {
  if (k < 0) throw DomainError("updown_k_step_kernel: negative step count");
  UpDownKernel kernel{N, params.p(), params.z_prime(), params.w_prime(), k, {}, {}};
  const int n = N + params.p();
  const HahnBasis basis = model_hahn_basis(params, N);
  const Eigen::MatrixXd& F = basis.orthonormal_matrix();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = std::exp(static_cast<double>(k) * log_c_squared(params, N, i));
  kernel.matrix = F.transpose() * lam.asDiagonal() * F;
  for (int i = 0; i < params.p(); ++i) kernel.c_powers.push_back(lam(i));
  return kernel;
}

Eigen::MatrixXd config_transition_matrix(const ModelParams& params, const UpDownKernel& kernel) {
  const auto configs = configs_in_box(kernel.N, kernel.p);
  const DiscreteEnsemble ens(params, kernel.N);
  std::vector<double> logP;
  logP.reserve(configs.size());
  for (const auto& X : configs) logP.push_back(ens.log_prob(X));
  double log_c = 0;
  for (double c : kernel.c_powers) log_c += std::log(c);
  const Eigen::Index n = static_cast<Eigen::Index>(configs.size());
  Eigen::MatrixXd T(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      T(a, b) = std::exp(0.5 * (logP[b] - logP[a]) - log_c) *
                det_sub(kernel.matrix, configs[a].points(), configs[b].points());
  return T;
}

// ---------------------------------------------------------------------------

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

ExactUpDown::ExactUpDown(ModelParams params, int N)
    : params_(std::move(params)), N_(N), configs_(configs_in_box(N, params_.p())) {
  const int n = N + params_.p();
  for (int x = 0; x < n; ++x) weights_.push_back(weight_wN_exact(params_, N, x));
  scale_ = scale_exact(params_, N);
  for (int i = 0; i < params_.p(); ++i) c_sq_.push_back(c_squared_exact(params_, N, i));
  // core = T diag(1 / w_{N+1}) T^T
  std::vector<Rational> inv_w1(n + 1);
  for (int y = 0; y <= n; ++y) inv_w1[y] = Rational(1) / weight_wN_exact(params_, N + 1, y);
  std::vector<Rational> core(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = std::max(0, x - 1); y <= std::min(n - 1, x + 1); ++y) {
      Rational s(0);
      for (int m = std::max(x, y); m <= std::min(x, y) + 1; ++m)
        s += core_T(params_, N, x, m) * core_T(params_, N, y, m) * inv_w1[m];
      core[static_cast<std::size_t>(x) * n + y] = s;
    }
  powers_.push_back(std::move(core));
}

const std::vector<Rational>& ExactUpDown::inner_power(int k) const {
  const std::size_t n = weights_.size();
  while (static_cast<int>(powers_.size()) < k) {
    const auto& prev = powers_.back();
    const auto& core = powers_.front();
    std::vector<Rational> next(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < n; ++m) {
        if (prev[i * n + m] == 0) continue;
        const Rational a = prev[i * n + m] * weights_[m];
        for (std::size_t j = (m > 0 ? m - 1 : 0); j <= std::min(n - 1, m + 1); ++j)
          next[i * n + j] += a * core[m * n + j];
      }
    powers_.push_back(std::move(next));
  }
  return powers_[k - 1];
}

Rational ExactUpDown::transition(const ParticleConfig& X, const ParticleConfig& Xp, int k) const {
  if (X.N() != N_ || Xp.N() != N_ || X.p() != params_.p() || Xp.p() != params_.p())
    throw DomainError("ExactUpDown: configuration box mismatch");
  if (k < 0) throw DomainError("ExactUpDown: negative step count");
  if (k == 0) return X == Xp ? Rational(1) : Rational(0);
  const int p = params_.p();
  const std::size_t n = weights_.size();
  const auto& inner = inner_power(k);
  std::vector<std::vector<Rational>> m(p, std::vector<Rational>(p));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m[i][j] = inner[static_cast<std::size_t>(X[i]) * n + Xp[j]];
  Rational v = determinant(std::move(m));
  if (v == 0) return v;
  v *= Rational(vandermonde(Xp)) / Rational(vandermonde(X));
  for (int j = 0; j < p; ++j) v *= weights_[Xp[j]];
  for (int step = 0; step < k; ++step)
    for (int i = 0; i < p; ++i) v *= scale_ / c_sq_[i];
  return v;
}

Rational ExactUpDown::composed_transition(const ParticleConfig& X, const ParticleConfig& Xp) const {
  const int p = params_.p();
  Rational total(0);
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    std::vector<int> y(X.points().begin(), X.points().end());
    bool ok = true;
    for (int i = 0; i < p; ++i) {
      if (mask & (1u << i)) ++y[i];
      if (i > 0 && y[i] <= y[i - 1]) ok = false;
    }
    if (!ok) continue;
    const ParticleConfig Y(std::move(y), N_ + 1, p);
    const Rational up = up_transition_exact(params_, N_, X, Y);
    if (up == 0) continue;
    total += up * down_transition_exact(Xp, Y);
  }
  return total;
}

std::vector<std::vector<Rational>> ExactUpDown::matrix(int k) const {
  std::vector<std::vector<Rational>> out(configs_.size(), std::vector<Rational>(configs_.size()));
  for (std::size_t a = 0; a < configs_.size(); ++a)
    for (std::size_t b = 0; b < configs_.size(); ++b) out[a][b] = transition(configs_[a], configs_[b], k);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Draws a move mask given per-particle stay/move factors; the weight of a mask
// is the product of its factors times V(y)/V(x).
template <class StayFn, class MoveFn>
void masked_step(std::vector<int>& x, int direction, StayFn stay, MoveFn move, RngStream& rng) {
  const int p = static_cast<int>(x.size());
  const unsigned masks = 1u << p;
  thread_local std::vector<double> weights;
  thread_local std::vector<int> y;
  weights.assign(masks, 0.0);
  y.resize(p);
  double total = 0;
  for (unsigned mask = 0; mask < masks; ++mask) {
    double w = 1.0;
    for (int i = 0; i < p; ++i) {
      const bool moves = mask & (1u << i);
      y[i] = x[i] + (moves ? direction : 0);
      w *= moves ? move(x[i]) : stay(x[i]);
    }
    for (int j = 1; j < p && w != 0; ++j)
      for (int i = 0; i < j; ++i) w *= static_cast<double>(y[j] - y[i]) / (x[j] - x[i]);
    weights[mask] = w;
    total += w;
  }
  double u = rng.uniform() * total;
  unsigned chosen = masks - 1;
  for (unsigned mask = 0; mask < masks; ++mask) {
    if (weights[mask] <= 0) continue;
    chosen = mask;
    if (u < weights[mask]) break;
    u -= weights[mask];
  }
  for (int i = 0; i < p; ++i)
    if (chosen & (1u << i)) x[i] += direction;
}

}  // namespace

void up_step(const ModelParams& params, int N, std::vector<int>& x, RngStream& rng) {
  const double zp = params.z_prime(), wp = params.w_prime();
  masked_step(
      x, +1, [&](int xi) { return zp + N - xi; }, [&](int xi) { return wp + 1 + xi; }, rng);
}

void down_step(int N, std::vector<int>& x, RngStream& rng) {
  const int p = static_cast<int>(x.size());
  masked_step(
      x, -1, [&](int xi) { return static_cast<double>(N + p - xi); },
      [](int xi) { return static_cast<double>(xi); }, rng);
}

std::vector<ParticleConfig> sample_up_chain(const ModelParams& params, int N_target, RngStream& rng) {
  const int p = params.p();
  std::vector<int> x(p);
  for (int i = 0; i < p; ++i) x[i] = i;
  std::vector<ParticleConfig> path;
  path.reserve(N_target + 1);
  path.emplace_back(x, 0, p);
  for (int N = 0; N < N_target; ++N) {
    up_step(params, N, x, rng);
    path.emplace_back(x, N + 1, p);
  }
  return path;
}

ParticleConfig sample_stationary(const ModelParams& params, int N, RngStream& rng) {
  const int p = params.p();
  std::vector<int> x(p);
  for (int i = 0; i < p; ++i) x[i] = i;
  for (int n = 0; n < N; ++n) up_step(params, n, x, rng);
  return ParticleConfig(std::move(x), N, p);
}

void advance(const ModelParams& params, ChainState& state, long steps, RngStream& rng) {
  const int N = state.config.N();
  std::vector<int> x(state.config.points().begin(), state.config.points().end());
  for (long s = 0; s < steps; ++s) {
    up_step(params, N, x, rng);
    down_step(N, x, rng);
  }
  state.config = ParticleConfig(std::move(x), N, params.p());
  state.time += steps;
  state.rng_position = rng.position();
}

std::vector<ParticleConfig> sample_updown_trajectory(const ModelParams& params, int N, long steps, RngStream& rng,
                                                     const std::optional<ParticleConfig>& init) {
  if (init && (init->N() != N || init->p() != params.p()))
    throw DomainError("initial configuration is not in box (N, p)");
  ParticleConfig start = init ? *init : sample_stationary(params, N, rng);
  std::vector<ParticleConfig> path{start};
  std::vector<int> x(start.points().begin(), start.points().end());
  for (long s = 0; s < steps; ++s) {
    up_step(params, N, x, rng);
    down_step(N, x, rng);
    path.emplace_back(x, N, params.p());
  }
  return path;
}

// ---------------------------------------------------------------------------

void write_trajectory_csv_header(std::ostream& os) { os << "trajectory_id,step,particle_index,position\n"; }

void write_trajectory_csv(std::ostream& os, std::uint64_t trajectory_id, const std::vector<ParticleConfig>& path) {
  for (std::size_t step = 0; step < path.size(); ++step)
    for (int i = 0; i < path[step].p(); ++i)
      os << trajectory_id << ',' << step << ',' << i << ',' << path[step][i] << '\n';
}

void write_kernel_csv(std::ostream& os, const UpDownKernel& kernel) {
  os.precision(17);
  for (Eigen::Index r = 0; r < kernel.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < kernel.matrix.cols(); ++c) os << (c ? "," : "") << kernel.matrix(r, c);
    os << '\n';
  }
}

nlohmann::json kernel_metadata(const UpDownKernel& kernel) {
  return {{"N", kernel.N}, {"p", kernel.p}, {"zPrime", kernel.z_prime}, {"wPrime", kernel.w_prime}, {"k", kernel.k}};
}

}  // namespace gtflow
