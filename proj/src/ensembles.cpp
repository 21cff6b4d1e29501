#include "gtflow/ensembles.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gtflow/orthopoly.hpp"

namespace gtflow {

namespace {

long as_long(double v) { return static_cast<long>(v); }

void require_integral_params(const ModelParams& params) {
  if (!is_integer(params.z_prime()) || !is_integer(params.w_prime()))
    throw ParameterError("exact evaluation requires integral zPrime and wPrime");
}

// 1/Gamma(n) for integer n, zero at the poles.
Rational inv_gamma(long n) {
  if (n <= 0) return Rational(0);
  return Rational(1) / Rational(gamma_int(n));
}

Rational gamma_r(long n) { return Rational(gamma_int(n)); }

}  // namespace

Rational weight_wN_exact(const ModelParams& params, int N, int x) {
  require_integral_params(params);
  const int p = params.p();
  if (x < 0 || x > N + p - 1) throw DomainError("weight_wN: site outside {0..N+p-1}");
  const long zp = as_long(params.z_prime()), wp = as_long(params.w_prime());
  return gamma_r(zp + N - x) * gamma_r(wp + x + 1) / (gamma_r(N + p - x) * gamma_r(x + 1));
}

double log_weight_wN(const ModelParams& params, int N, int x) {
  const int p = params.p();
  if (x < 0 || x > N + p - 1) throw DomainError("weight_wN: site outside {0..N+p-1}");
  const double zp = params.z_prime(), wp = params.w_prime();
  return std::lgamma(zp + N - x) + std::lgamma(wp + x + 1) - std::lgamma(N + p - x) - std::lgamma(x + 1.0);
}

double weight_wN(const ModelParams& params, int N, int x) { return std::exp(log_weight_wN(params, N, x)); }

// ---------------------------------------------------------------------------

DiscreteEnsemble::DiscreteEnsemble(ModelParams params, int N) : params_(std::move(params)), N_(N) {
  if (N < 0) throw DomainError("DiscreteEnsemble requires N >= 0");
}

void DiscreteEnsemble::check_box(const ParticleConfig& X) const {
  if (X.N() != N_ || X.p() != params_.p())
    throw DomainError("configuration box (" + std::to_string(X.N()) + "," + std::to_string(X.p()) +
                      ") does not match ensemble (" + std::to_string(N_) + "," + std::to_string(params_.p()) + ")");
}

void DiscreteEnsemble::require_integral() const { require_integral_params(params_); }

Rational DiscreteEnsemble::Z_exact() const {
  require_integral();
  const int p = params_.p();
  const Rational s = params_.z_prime_exact() + params_.w_prime_exact();
  Rational z(1);
  for (int i = 1; i <= N_; ++i) z *= pochhammer(Rational(i), p) / pochhammer(s + i, p);
  const long zp = as_long(params_.z_prime()), wp = as_long(params_.w_prime());
  for (int i = 1; i <= p; ++i) z /= gamma_r(wp + i) * gamma_r(zp - i + 1);
  return z;
}

double DiscreteEnsemble::log_Z() const {
  const int p = params_.p();
  const double s = params_.z_prime() + params_.w_prime();
  double v = 0;
  for (int i = 1; i <= N_; ++i) v += log_pochhammer(i, p) - log_pochhammer(s + i, p);
  for (int i = 1; i <= p; ++i)
    v -= std::lgamma(params_.w_prime() + i) + std::lgamma(params_.z_prime() - i + 1);
  return v;
}

Rational DiscreteEnsemble::Z_bruteforce_exact() const {
  require_integral();
  std::vector<Rational> w(N_ + params_.p());
  for (int x = 0; x < N_ + params_.p(); ++x) w[x] = weight_wN_exact(params_, N_, x);
  Rational total(0);
  for (const auto& X : configs_in_box(N_, params_.p())) {
    Rational v(vandermonde(X));
    v *= v;
    for (int x : X.points()) v *= w[x];
    total += v;
  }
  return Rational(1) / total;
}

Rational DiscreteEnsemble::prob_exact(const ParticleConfig& X) const {
  check_box(X);
  Rational v(vandermonde(X));
  v *= v * Z_exact();
  for (int x : X.points()) v *= weight_wN_exact(params_, N_, x);
  return v;
}

double DiscreteEnsemble::log_prob(const ParticleConfig& X) const {
  check_box(X);
  double v = log_Z();
  auto pts = X.points();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    v += log_weight_wN(params_, N_, pts[j]);
    for (std::size_t i = 0; i < j; ++i) v += 2 * std::log(static_cast<double>(pts[j] - pts[i]));
  }
  return v;
}

double DiscreteEnsemble::prob(const ParticleConfig& X) const { return std::exp(log_prob(X)); }

// ---------------------------------------------------------------------------

GeneralZWMeasure::GeneralZWMeasure(int k, int l, int z_prime, int w_prime, int N)
    : k_(k), l_(l), zp_(z_prime), wp_(w_prime), N_(N) {
  if (N < 0) throw DomainError("GeneralZWMeasure requires N >= 0");
  if (k + l < 0 || !(z_prime - k > -1) || !(w_prime - l > -1))
    throw ParameterError("inadmissible quadruple (" + std::to_string(k) + "," + std::to_string(l) + "," +
                         std::to_string(z_prime) + "," + std::to_string(w_prime) +
                         "): need k+l >= 0, z'-k > -1, w'-l > -1");
  // 1/S_N = prod_i Gamma(z+w+i) Gamma(z+w'+i) Gamma(z'+w+i) Gamma(z'+w'+i) Gamma(i) / Gamma(z+w+z'+w'+i)
  Rational inv(1);
  for (long i = 1; i <= N; ++i) {
    inv *= gamma_r(k + l + i) * gamma_r(k + w_prime + i) * gamma_r(z_prime + l + i) *
           gamma_r(z_prime + w_prime + i) * gamma_r(i);
    inv /= gamma_r(k + l + z_prime + w_prime + i);
  }
  inv_S_ = inv;
}

Rational GeneralZWMeasure::mass(const Signature& lambda) const {
  if (lambda.level() != N_) throw DomainError("GeneralZWMeasure: signature level mismatch");
  Rational d(dim(lambda));
  Rational m = d * d * inv_S_;
  for (int i = 1; i <= N_; ++i) {
    const long li = lambda[i - 1];
    m *= inv_gamma(k_ - li + i) * inv_gamma(l_ + N_ + 1 + li - i) * inv_gamma(zp_ - li + i) *
         inv_gamma(wp_ + N_ + 1 + li - i);
    if (m == 0) break;
  }
  return m;
}

std::vector<Signature> GeneralZWMeasure::support() const {
  // 1/Gamma(z - lambda_1 + 1) forces lambda_1 <= z, 1/Gamma(w + 1 + lambda_N) forces
  // lambda_N >= -w; likewise for the primed pair.
  const int hi = std::min(k_, zp_);
  const int lo = std::max(-l_, -wp_);
  std::vector<Signature> out;
  if (N_ == 0) {
    out.emplace_back();
    return out;
  }
  if (hi < lo) return out;
  for (const auto& s : signatures_in_box(N_, hi - lo)) {
    std::vector<int> parts(s.parts().begin(), s.parts().end());
    for (int& v : parts) v += lo;
    Signature lambda(std::move(parts));
    if (mass(lambda) != 0) out.push_back(std::move(lambda));
  }
  return out;
}

GeneralZWMeasure GeneralZWMeasure::shifted(int n) const { return GeneralZWMeasure(k_ + n, l_ - n, zp_ + n, wp_ - n, N_); }

Rational prob_MN(const ModelParams& params, const Signature& lambda) {
  require_integral_params(params);
  return GeneralZWMeasure(params.p(), 0, static_cast<int>(params.z_prime()), static_cast<int>(params.w_prime()),
                          lambda.level())
      .mass(lambda);
}

// ---------------------------------------------------------------------------

namespace {

double signed_vandermonde(std::span<const double> xs) {
  double v = 1.0;
  for (std::size_t j = 1; j < xs.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v *= xs[j] - xs[i];
  return v;
}

double chamber_integral_of_v2(const ModelParams& params, int nodes) {
  const auto rule = gauss_jacobi_rule(params.jacobi_alpha(), params.jacobi_beta(), nodes);
  const double cube = cube_quadrature(rule, params.p(), [](std::span<const double> pts) {
    const double v = signed_vandermonde(pts);
    return v * v;
  });
  return cube / std::tgamma(params.p() + 1.0);
}

}  // namespace

LimitEnsemble::LimitEnsemble(ModelParams params, int quadrature_nodes)
    : params_(std::move(params)),
      nodes_(quadrature_nodes > 0 ? quadrature_nodes : default_quadrature_order(2 * (params_.p() - 1))) {
  log_B_ = -std::log(chamber_integral_of_v2(params_, nodes_));
  B_ = std::exp(log_B_);
}

double LimitEnsemble::density(std::span<const double> X) const {
  if (static_cast<int>(X.size()) != params_.p()) throw DomainError("density: need exactly p coordinates");
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i] < 0 || X[i] > 1) return 0.0;
    if (i > 0 && !(X[i] > X[i - 1])) return 0.0;
  }
  double v = log_B_;
  for (std::size_t j = 0; j < X.size(); ++j) {
    const double x = X[j];
    // 0^0 = 1 at the endpoints; 0^a with a < 0 is an integrable singularity.
    if (params_.jacobi_beta() != 0) v += params_.jacobi_beta() * std::log(x);
    if (params_.jacobi_alpha() != 0) v += params_.jacobi_alpha() * std::log1p(-x);
    for (std::size_t i = 0; i < j; ++i) v += 2 * std::log(X[j] - X[i]);
  }
  return std::exp(v);
}

double LimitEnsemble::total_mass(int nodes) const {
  return B_ * chamber_integral_of_v2(params_, nodes);
}

double density_rho(const LimitEnsemble& ensemble, std::span<const double> X) { return ensemble.density(X); }

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::pair<double, double> discrete_to_continuum_check(const DiscreteEnsemble& discrete, const LimitEnsemble& limit,
                                                      std::span<const double> X) {
  const ModelParams& params = discrete.params();
  const ModelParams& other = limit.params();
  if (params.p() != other.p() || params.z_prime() != other.z_prime() || params.w_prime() != other.w_prime())
    throw DomainError("discrete and limit ensembles have different parameters");
  const int p = params.p();
  const int M = discrete.N() + p - 1;
  if (static_cast<int>(X.size()) != p) throw DomainError("need exactly p coordinates");
  std::vector<int> sites(p);
  for (int i = 0; i < p; ++i) {
    if (!(X[i] > 0 && X[i] < 1)) throw DomainError("point must lie strictly inside (0,1)");
    sites[i] = round_half_up(M * X[i]);
    if (i > 0 && sites[i] <= sites[i - 1])
      throw DomainError("coordinates " + std::to_string(X[i - 1]) + " and " + std::to_string(X[i]) +
                        " round to colliding lattice sites");
  }
  const ParticleConfig config(sites, discrete.N(), p);
  const double scaled = std::exp(p * std::log(static_cast<double>(M)) + discrete.log_prob(config));
  return {scaled, limit.density(X)};
}

nlohmann::json params_to_json(const ModelParams& params, std::optional<int> N) {
  nlohmann::json j{{"p", params.p()},
                   {"zPrime", params.z_prime()},
                   {"wPrime", params.w_prime()},
                   {"mode", to_string(params.mode())}};
  if (N) j["N"] = *N;
  return j;
}

}  // namespace gtflow
