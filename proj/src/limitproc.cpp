#include "gtflow/limitproc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "gtflow/ensembles.hpp"

namespace gtflow {

double eigen_K(const ModelParams& params, int i) {
  if (i < 0) throw DomainError("eigen_K: negative index");
  return i * (i + params.w_prime() + params.z_prime() + 1 - params.p());
}

Rational eigen_K_exact(const ModelParams& params, int i) {
  if (i < 0) throw DomainError("eigen_K: negative index");
  return Rational(i) * (Rational(i) + params.w_prime_exact() + params.z_prime_exact() + 1 - params.p());
}

double total_K(const ModelParams& params) {
  double s = 0;
  for (int i = 0; i < params.p(); ++i) s += eigen_K(params, i);
  return s;
}

double total_K_closed(const ModelParams& params) {
  const double p = params.p();
  return p * (p - 1) / 2 * (params.w_prime() + params.z_prime() - (p - 2) / 3);
}

Rational total_K_exact(const ModelParams& params) {
  Rational s(0);
  for (int i = 0; i < params.p(); ++i) s += eigen_K_exact(params, i);
  return s;
}

Rational total_K_closed_exact(const ModelParams& params) {
  const int p = params.p();
  return ratio(p * (p - 1), 2) * (params.w_prime_exact() + params.z_prime_exact() - ratio(p - 2, 3));
}

double generator_eigenvalue(const ModelParams& params, const Partition& lambda) {
  const int p = params.p();
  if (lambda.length() != p) throw DomainError("partition must have exactly p parts");
  double s = 0;
  for (int i = 1; i <= p; ++i) s += eigen_K(params, p - i) - eigen_K(params, lambda[i - 1] + p - i);
  return s;
}

Rational generator_eigenvalue_exact(const ModelParams& params, const Partition& lambda) {
  const int p = params.p();
  if (lambda.length() != p) throw DomainError("partition must have exactly p parts");
  Rational s(0);
  for (int i = 1; i <= p; ++i) s += eigen_K_exact(params, p - i) - eigen_K_exact(params, lambda[i - 1] + p - i);
  return s;
}

// ---------------------------------------------------------------------------

std::vector<double> jacobi_function_bounds(const JacobiBasis& basis, int count) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::vector<double>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& bounds = cache[{basis.alpha(), basis.beta()}];
  if (static_cast<int>(bounds.size()) < count) {
    const int n = std::max(count, HeatKernel::kMaxTerms + HeatKernel::kWindow);
    bounds.assign(n, 0.0);
    constexpr int kGrid = 480;
    std::vector<double> vals(n);
    for (int g = 0; g <= kGrid; ++g) {
      const double x = HeatKernel::kMargin + (1 - 2 * HeatKernel::kMargin) * g / kGrid;
      basis.orthonormal_functions(x, vals);
      for (int i = 0; i < n; ++i) bounds[i] = std::max(bounds[i], std::abs(vals[i]));
    }
  }
  return {bounds.begin(), bounds.begin() + count};
}

HeatKernel::HeatKernel(const ModelParams& params, double t, double tol)
    : params_(params), t_(t), tol_(tol), basis_(model_jacobi_basis(params)) {
  if (!(t > 0)) throw DomainError("heat kernel requires t > 0");
  if (!(tol > 0)) throw DomainError("heat kernel requires tol > 0");
  const int n = kMaxTerms + kWindow;
  decay_.resize(n);
  for (int i = 0; i < n; ++i) decay_[i] = std::exp(-t * eigen_K(params, i));
  const auto bounds = jacobi_function_bounds(basis_, n);
  for (int i = 1; i <= kMaxTerms; ++i) {
    double window = 0;
    for (int m = i; m < i + kWindow; ++m) window += decay_[m] * bounds[m] * bounds[m];
    if (window < tol) {
      L_ = i;
      tail_ = window;
      return;
    }
  }
  throw TruncationError("heat kernel series did not reach tol within " + std::to_string(kMaxTerms) +
                        " terms at t = " + std::to_string(t));
}

std::vector<double> HeatKernel::functions(double x) const {
  std::vector<double> out(L_);
  basis_.orthonormal_functions(x, out);
  return out;
}

double HeatKernel::sum_from(int from, double x, double y) const {
  const bool inside = x >= kMargin && x <= 1 - kMargin && y >= kMargin && y <= 1 - kMargin;
  int L = L_;
  std::vector<double> fx, fy;
  auto fill = [&](int count) {
    fx.assign(count, 0.0);
    fy.assign(count, 0.0);
    basis_.orthonormal_functions(x, fx);
    basis_.orthonormal_functions(y, fy);
  };
  if (inside) {
    fill(L);
  } else {
    // Widen until a full window of actual terms is negligible.
    const int cap = kMaxTerms + kWindow;
    fill(cap);
    while (true) {
      double window = 0;
      for (int m = L; m < L + kWindow && m < cap; ++m) window += std::abs(decay_[m] * fx[m] * fy[m]);
      if (window < tol_) break;
      L += kWindow;
      if (L + kWindow > cap)
        throw TruncationError("heat kernel series does not converge at boundary point within the term cap");
    }
  }
  double s = 0;
  for (int i = from; i < L; ++i) s += decay_[i] * fx[i] * fy[i];
  return s;
}

double heat_kernel(const ModelParams& params, double t, double x, double y, double tol) {
  return HeatKernel(params, t, tol)(x, y);
}

namespace {

bool strictly_increasing(std::span<const double> X) {
  for (std::size_t i = 1; i < X.size(); ++i)
    if (!(X[i] > X[i - 1])) return false;
  return true;
}

bool interior(std::span<const double> X) {
  for (double x : X)
    if (!(x > 0 && x < 1)) return false;
  return true;
}

double log_abs_vandermonde(std::span<const double> X) {
  double v = 0;
  for (std::size_t j = 1; j < X.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v += std::log(std::abs(X[j] - X[i]));
  return v;
}

double signed_vandermonde(std::span<const double> X) {
  double v = 1;
  for (std::size_t j = 1; j < X.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v *= X[j] - X[i];
  return v;
}

double log_single_weight(const ModelParams& params, double x) {
  double v = 0;
  if (params.jacobi_beta() != 0) v += params.jacobi_beta() * std::log(x);
  if (params.jacobi_alpha() != 0) v += params.jacobi_alpha() * std::log1p(-x);
  return v;
}

void require_chamber_point(std::span<const double> X, int p, const char* what) {
  if (static_cast<int>(X.size()) != p) throw DomainError(std::string(what) + ": need exactly p coordinates");
  if (!interior(X) || !strictly_increasing(X))
    throw DomainError(std::string(what) + ": point must lie in the open chamber (rho vanishes there)");
}

double det_small(Eigen::MatrixXd& m) { return m.rows() == 0 ? 1.0 : m.determinant(); }

// e^{tK} det[J^t(x_i, y_j)]. The direct determinant cancels down to about
// e^{-tK}, so the leading p modes are factored out:
// A D B^T = A0 (D0 + A0^{-1} A1 D1 (B0^{-1} B1)^T) B0^T.
double scaled_kernel_det(const HeatKernel& kernel, std::span<const double> X, std::span<const double> Y) {
  const ModelParams& params = kernel.params();
  const int p = params.p();
  const double t = kernel.t();
  // Truncate on the rescaled decays e^{-t(K(m) - K(p-1))}; the kernel's own
  // truncation is absolute and too coarse once e^{tK} multiplies the result.
  const JacobiBasis basis = model_jacobi_basis(params);
  const int cap = HeatKernel::kMaxTerms;
  const auto bounds = jacobi_function_bounds(basis, cap + HeatKernel::kWindow);
  const double top = eigen_K(params, p - 1);
  int L = -1;
  for (int i = p; i <= cap && L < 0; ++i) {
    double window = 0;
    for (int m = i; m < i + HeatKernel::kWindow; ++m)
      window += std::exp(-t * (eigen_K(params, m) - top)) * bounds[m] * bounds[m];
    if (window < kernel.tol()) L = i;
  }
  if (L < 0) throw TruncationError("scaled transition determinant did not converge within the term cap");
  Eigen::MatrixXd A(p, L), B(p, L);
  std::vector<double> f(L);
  for (int i = 0; i < p; ++i) {
    basis.orthonormal_functions(X[i], f);
    for (int m = 0; m < L; ++m) A(i, m) = f[m];
    basis.orthonormal_functions(Y[i], f);
    for (int m = 0; m < L; ++m) B(i, m) = f[m];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> a0(A.leftCols(p)), b0(B.leftCols(p));
  const Eigen::MatrixXd a1 = a0.solve(A.rightCols(L - p));
  const Eigen::MatrixXd b1 = b0.solve(B.rightCols(L - p));
  Eigen::MatrixXd core = Eigen::MatrixXd::Identity(p, p);
  for (int a = 0; a < p; ++a) {
    const double Ka = eigen_K(params, a);
    for (int m = 0; m < L - p; ++m) {
      const double r = std::exp(-t * (eigen_K(params, p + m) - Ka));
      for (int b = 0; b < p; ++b) core(a, b) += r * a1(a, m) * b1(b, m);
    }
  }
  return a0.determinant() * b0.determinant() * core.determinant();
}

}  // namespace

double transition_density(const HeatKernel& kernel, std::span<const double> X, std::span<const double> Y) {
  const ModelParams& params = kernel.params();
  const int p = params.p();
  require_chamber_point(X, p, "transition_density");
  if (static_cast<int>(Y.size()) != p) throw DomainError("transition_density: need exactly p coordinates");
  if (!strictly_increasing(Y) || !interior(Y)) return 0.0;
  double log_ratio = log_abs_vandermonde(Y) - log_abs_vandermonde(X);
  for (int i = 0; i < p; ++i) log_ratio += 0.5 * (log_single_weight(params, Y[i]) - log_single_weight(params, X[i]));
  return std::exp(log_ratio) * scaled_kernel_det(kernel, X, Y);
}

double transition_density(const ModelParams& params, double t, std::span<const double> X, std::span<const double> Y,
                          double tol) {
  return transition_density(HeatKernel(params, t, tol), X, Y);
}

namespace {

void check_times(std::span<const double> times, const std::vector<std::vector<double>>& configs) {
  if (times.empty() || times.size() != configs.size())
    throw DomainError("multi_time_density: need one configuration per time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("multi_time_density: times must be strictly increasing");
}

}  // namespace

double multi_time_density(const ModelParams& params, std::span<const double> times,
                          const std::vector<std::vector<double>>& configs, double tol) {
  check_times(times, configs);
  const int p = params.p();
  for (const auto& X : configs) require_chamber_point(X, p, "multi_time_density");
  const LimitEnsemble ens(params);
  double v = std::sqrt(ens.density(configs.front()) * ens.density(configs.back()));
  for (std::size_t j = 0; j + 1 < configs.size(); ++j) {
    const double dt = times[j + 1] - times[j];
    v *= scaled_kernel_det(HeatKernel(params, dt, tol), configs[j], configs[j + 1]);
  }
  return v;
}

double multi_time_density_chain(const ModelParams& params, std::span<const double> times,
                                const std::vector<std::vector<double>>& configs, double tol) {
  check_times(times, configs);
  const LimitEnsemble ens(params);
  double v = ens.density(configs.front());
  for (std::size_t j = 0; j + 1 < configs.size(); ++j)
    v *= transition_density(params, times[j + 1] - times[j], configs[j], configs[j + 1], tol);
  return v;
}

double extended_kernel(const ModelParams& params, double x, double t, double y, double s, double tol) {
  const int p = params.p();
  if (t >= s) {
    const JacobiBasis basis = model_jacobi_basis(params);
    std::vector<double> fx(p), fy(p);
    basis.orthonormal_functions(x, fx);
    basis.orthonormal_functions(y, fy);
    double v = 0;
    for (int i = 0; i < p; ++i) v += std::exp((t - s) * eigen_K(params, i)) * fx[i] * fy[i];
    return v;
  }
  return -HeatKernel(params, s - t, tol).sum_from(p, x, y);
}

double correlation_fn(const ModelParams& params, const std::vector<std::pair<double, double>>& points, double tol) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = extended_kernel(params, points[i].first, points[i].second, points[j].first, points[j].second, tol);
  return det_small(m);
}

double one_point_density(const ModelParams& params, double x) {
  std::vector<double> f(params.p());
  model_jacobi_basis(params).orthonormal_functions(x, f);
  double s = 0;
  for (double v : f) s += v * v;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

// coeff[a][node] = sum_{i<L} decay_i g_i(point_a) p_i(node) with g the orthonormal
// functions at the fixed points and p the orthonormal polynomials at the nodes.
std::vector<std::vector<double>> reduced_kernel(const HeatKernel& kernel, const JacobiBasis& basis,
                                                std::span<const double> points, const QuadratureRule& rule) {
  const int L = kernel.truncation();
  std::vector<std::vector<double>> g;
  for (double x : points) g.push_back(kernel.functions(x));
  std::vector<std::vector<double>> out(points.size(), std::vector<double>(rule.size(), 0.0));
  std::vector<double> pn(L);
  for (std::size_t node = 0; node < rule.size(); ++node) {
    basis.orthonormal_polys(rule.nodes[node], pn);
    for (std::size_t a = 0; a < points.size(); ++a) {
      double s = 0;
      for (int i = 0; i < L; ++i) s += kernel.decay(i) * g[a][i] * pn[i];
      out[a][node] = s;
    }
  }
  return out;
}

// sum over the cube of prod(weights) V(nodes) det[coeff[a][node_b]] f(nodes), divided by p!.
double chamber_sum(const QuadratureRule& rule, int p, const std::vector<std::vector<double>>& coeff,
                   const std::function<double(std::span<const double>)>& f) {
  const std::size_t n = rule.size();
  std::vector<std::size_t> idx(p, 0);
  std::vector<double> pts(p);
  Eigen::MatrixXd m(p, p);
  double total = 0;
  while (true) {
    double w = 1;
    for (int i = 0; i < p; ++i) {
      pts[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    const double v = signed_vandermonde(pts);
    if (v != 0) {
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) m(a, b) = coeff[a][idx[b]];
      total += w * v * det_small(m) * f(pts);
    }
    int i = p - 1;
    while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
    if (i < 0) break;
  }
  return total / std::tgamma(p + 1.0);
}

}  // namespace

double transition_expectation(const HeatKernel& kernel, std::span<const double> X,
                              const std::function<double(std::span<const double>)>& f, int f_degree, int nodes) {
  const ModelParams& params = kernel.params();
  const int p = params.p();
  require_chamber_point(X, p, "transition_expectation");
  const int degree = (p - 1) + (kernel.truncation() - 1) + f_degree;
  const int n = nodes > 0 ? nodes : default_quadrature_order(degree);
  const JacobiBasis basis = model_jacobi_basis(params);
  const QuadratureRule rule = gauss_jacobi_rule(basis.alpha(), basis.beta(), n);
  const auto coeff = reduced_kernel(kernel, basis, X, rule);
  double log_front = kernel.t() * total_K(params) - log_abs_vandermonde(X);
  for (double x : X) log_front -= 0.5 * log_single_weight(params, x);
  return std::exp(log_front) * chamber_sum(rule, p, coeff, f);
}

std::pair<double, double> semigroup_apply_check(const ModelParams& params, const Partition& lambda, double t,
                                                std::span<const double> X, double tol) {
  const HeatKernel kernel(params, t, tol);
  const auto f = [&](std::span<const double> Y) { return multidim_jacobi(params, lambda, Y); };
  const double quad = transition_expectation(kernel, X, f, lambda.length() ? lambda[0] : 0);
  const double closed = std::exp(t * generator_eigenvalue(params, lambda)) * multidim_jacobi(params, lambda, X);
  return {quad, closed};
}

std::pair<double, double> stationarity_check(const ModelParams& params, double t, std::span<const double> Y,
                                             double tol) {
  const int p = params.p();
  require_chamber_point(Y, p, "stationarity_check");
  const HeatKernel kernel(params, t, tol);
  const LimitEnsemble ens(params);
  const JacobiBasis basis = model_jacobi_basis(params);
  const int degree = (p - 1) + (kernel.truncation() - 1);
  const QuadratureRule rule = gauss_jacobi_rule(basis.alpha(), basis.beta(), default_quadrature_order(degree));
  const auto coeff = reduced_kernel(kernel, basis, Y, rule);
  // The determinant is built with rows indexed by Y, so transpose the roles.
  double log_front = ens.log_B() + t * total_K(params) + log_abs_vandermonde(Y);
  for (double y : Y) log_front += 0.5 * log_single_weight(params, y);
  const double integral = chamber_sum(rule, p, coeff, [](std::span<const double>) { return 1.0; });
  return {std::exp(log_front) * integral, ens.density(Y)};
}

// ---------------------------------------------------------------------------

Polynomial jacobi_polynomial(const Rational& alpha, const Rational& beta, int n, int nvars, int var) {
  return Polynomial::univariate(nvars, var, jacobi_monomial_coeffs<Rational>(alpha, beta, n));
}

Polynomial multidim_jacobi_polynomial(const ModelParams& params, const Partition& lambda) {
  const int p = params.p();
  if (lambda.length() != p) throw DomainError("partition must have exactly p parts");
  const Rational alpha = params.z_prime_exact() - p;
  const Rational beta = params.w_prime_exact();
  std::vector<std::vector<Polynomial>> E(p, std::vector<Polynomial>(p, Polynomial(p)));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) E[i][j] = jacobi_polynomial(alpha, beta, lambda[i] + p - 1 - i, p, j);
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial det(p);
  do {
    int inversions = 0;
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        if (perm[a] > perm[b]) ++inversions;
    Polynomial term = Polynomial::constant(p, Rational(inversions % 2 ? -1 : 1));
    for (int i = 0; i < p; ++i) term = term * E[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j) det = det.divide_by_difference(i, j);
  return det;
}

Polynomial jacobi_operator(const ModelParams& params, const Polynomial& f) {
  const int n = f.nvars();
  const Rational wp = params.w_prime_exact();
  const Rational slope = wp + params.z_prime_exact() - params.p() + 2;
  Polynomial out(n);
  for (int i = 0; i < n; ++i) {
    const Polynomial x = Polynomial::variable(n, i);
    const Polynomial one = Polynomial::constant(n, Rational(1));
    const Polynomial d1 = f.derivative(i);
    out += x * (one - x) * d1.derivative(i);
    out += (Polynomial::constant(n, wp + 1) - x * slope) * d1;
  }
  return out;
}

Polynomial generator_polynomial(const ModelParams& params, const Polynomial& f) {
  const int p = params.p();
  if (f.nvars() != p) throw DomainError("generator: polynomial must have p variables");
  Polynomial g = jacobi_operator(params, vandermonde_polynomial(p) * f);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j) g = g.divide_by_difference(i, j);
  return g + f * total_K_exact(params);
}

Rational generator_drift_form(const ModelParams& params, const Polynomial& f, std::span<const Rational> X,
                              const Rational& factor) {
  const int p = params.p();
  Rational v = jacobi_operator(params, f).evaluate(X);
  for (int i = 0; i < p; ++i) {
    Rational inter(0);
    for (int j = 0; j < p; ++j)
      if (j != i) inter += Rational(1) / (X[i] - X[j]);
    v += factor * X[i] * (1 - X[i]) * inter * f.derivative(i).evaluate(X);
  }
  return v;
}

namespace {

// D f + 2 sum_{i<j} (x_i(1-x_i) d_i f - x_j(1-x_j) d_j f) / (x_i - x_j) as a polynomial.
Polynomial drift_form_polynomial(const ModelParams& params, const Polynomial& f) {
  const int p = f.nvars();
  Polynomial out = jacobi_operator(params, f);
  const Polynomial one = Polynomial::constant(p, Rational(1));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const Polynomial xi = Polynomial::variable(p, i), xj = Polynomial::variable(p, j);
      const Polynomial num = xi * (one - xi) * f.derivative(i) - xj * (one - xj) * f.derivative(j);
      out += num.divide_by_difference(i, j) * Rational(2);
    }
  return out;
}

}  // namespace

GeneratorValue generator_apply_exact(const ModelParams& params, const Polynomial& f, std::span<const Rational> X) {
  const int p = params.p();
  if (f.nvars() != p || static_cast<int>(X.size()) != p) throw DomainError("generator: dimension mismatch");
  GeneratorValue out;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j)
      if (X[i] == X[j]) out.coincident = true;
  if (out.coincident) {
    out.drift = drift_form_polynomial(params, f).evaluate(X);
    out.h_transform = out.drift;
    return out;
  }
  const Polynomial V = vandermonde_polynomial(p);
  out.h_transform = jacobi_operator(params, V * f).evaluate(X) / V.evaluate(X) + total_K_exact(params) * f.evaluate(X);
  out.drift = generator_drift_form(params, f, X, Rational(2));
  return out;
}

double generator_apply(const ModelParams& params, const Polynomial& f, std::span<const double> X) {
  const int p = params.p();
  if (f.nvars() != p || static_cast<int>(X.size()) != p) throw DomainError("generator: dimension mismatch");
  bool coincident = false;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j)
      if (X[i] == X[j]) coincident = true;
  if (coincident) return drift_form_polynomial(params, f).evaluate(X);
  const Polynomial V = vandermonde_polynomial(p);
  return jacobi_operator(params, V * f).evaluate(X) / V.evaluate(X) + total_K(params) * f.evaluate(X);
}

Polynomial harmonic_test_operator(const Polynomial& f, const Rational& a, const Rational& b, const Rational& c) {
  const int p = f.nvars();
  Polynomial out(p);
  const Rational drift = ratio(-2 * (p - 2), 3);
  for (int i = 0; i < p; ++i) {
    const Polynomial x = Polynomial::variable(p, i);
    const Polynomial d1 = f.derivative(i);
    out += (x * x + x * a + Polynomial::constant(p, b)) * d1.derivative(i);
    out += (x * drift + Polynomial::constant(p, c)) * d1;
  }
  return out;
}

Polynomial vandermonde_eigen_residual(const ModelParams& params) {
  const Polynomial V = vandermonde_polynomial(params.p());
  return jacobi_operator(params, V) + V * total_K_exact(params);
}

Polynomial vandermonde_harmonic_residual(int p, const Rational& a, const Rational& b, const Rational& c) {
  return harmonic_test_operator(vandermonde_polynomial(p), a, b, c);
}

std::pair<double, double> doob_identities_check(const ModelParams& params, std::span<const double> X, double a,
                                                double b, double c) {
  const int p = params.p();
  if (static_cast<int>(X.size()) != p) throw DomainError("doob_identities_check: need exactly p coordinates");
  const Polynomial V = vandermonde_polynomial(p);
  const double v = V.evaluate(X);
  const double scale = std::max(std::abs(v), 1e-300);
  const double r1 = std::abs(jacobi_operator(params, V).evaluate(X) + total_K(params) * v) /
                    (scale * std::max(1.0, total_K(params)));
  const double r2 = std::abs(harmonic_test_operator(V, to_rational(a), to_rational(b), to_rational(c)).evaluate(X)) /
                    (scale * (1 + std::abs(a) + std::abs(b) + std::abs(c)));
  return {r1, r2};
}

// ---------------------------------------------------------------------------

void write_grid_csv(std::ostream& os, const std::vector<GridValue>& grid) {
  os.precision(17);
  os << "x,y,value\n";
  for (const auto& g : grid) os << g.x << ',' << g.y << ',' << g.value << '\n';
}

nlohmann::json grid_metadata(const HeatKernel& kernel) {
  return {{"p", kernel.params().p()},
          {"zPrime", kernel.params().z_prime()},
          {"wPrime", kernel.params().w_prime()},
          {"t", kernel.t()},
          {"truncation", kernel.truncation()},
          {"tol", kernel.tol()}};
}

}  // namespace gtflow
