#include "gtflow/orthopoly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace gtflow {

double log_pochhammer(double a, int k) {
  if (k == 0) return 0.0;
  return std::lgamma(a + k) - std::lgamma(a);
}

// ---------------------------------------------------------------------------
// Hahn

template <class T>
T hahn_series(const T& alpha, const T& beta, int M, int k, int x) {
  if (k < 0 || k > M || x < 0 || x > M) throw DomainError("hahn_series: index out of range");
  T sum = T(0);
  T term = T(1);
  const T top = T(k) + alpha + beta + T(1);
  for (int j = 0; j <= k; ++j) {
    sum += term;
    if (j == k || j == x) break;  // (-k)_j or (-x)_j vanishes from here on
    term *= T(j - k) * (top + T(j)) * T(j - x);
    term /= (alpha + T(1 + j)) * T(j - M) * T(j + 1);
  }
  return sum;
}

template <class T>
T hahn_weight_reduced(const T& alpha, const T& beta, int M, int x) {
  T w = pochhammer(alpha + T(1), x) * pochhammer(beta + T(1), M - x);
  for (int i = 2; i <= x; ++i) w /= T(i);
  for (int i = 2; i <= M - x; ++i) w /= T(i);
  return w;
}

template <class T>
T hahn_norm_reduced(const T& alpha, const T& beta, int M, int k) {
  if (k < 0 || k > M) throw DomainError("hahn_norm: degree out of range");
  // (-1)^k / (-M)_k = (M-k)!/M!, so the closed form reads
  // (k+a+b+1)_{M+1} (b+1)_k k! (M-k)! / ((2k+a+b+1) (a+1)_k M!^2).
  const T s = alpha + beta;
  T num = (k == 0) ? T(pochhammer(T(s + T(2)), M))
                   : T(pochhammer(T(T(k) + s + T(1)), M + 1) / (T(2 * k) + s + T(1)));
  num *= pochhammer(beta + T(1), k);
  for (int i = 2; i <= k; ++i) num *= T(i);
  T den = pochhammer(alpha + T(1), k);
  // k!(M-k)!/M! ... collapse (M-k)!/M!^2 as 1/(M!/(M-k)! * M!)
  for (int i = M - k + 1; i <= M; ++i) den *= T(i);
  for (int i = 2; i <= M; ++i) den *= T(i);
  // k! was included in num; (M-k)! cancels against the first M!: M!/(M-k)! above.
  return num / den;
}

template <class T>
T hahn_inner_reduced(const T& alpha, const T& beta, int M, int k, int l) {
  T s = T(0);
  for (int x = 0; x <= M; ++x)
    s += hahn_weight_reduced(alpha, beta, M, x) * hahn_series(alpha, beta, M, k, x) * hahn_series(alpha, beta, M, l, x);
  return s;
}

template <class T>
T hahn_dual_sum(const T& alpha, const T& beta, int M, int x, int y) {
  T s = T(0);
  for (int k = 0; k <= M; ++k)
    s += hahn_series(alpha, beta, M, k, x) * hahn_series(alpha, beta, M, k, y) / hahn_norm_reduced(alpha, beta, M, k);
  return s;
}

template <class T>
T hahn_dual_rhs(const T& alpha, const T& beta, int M, int x, int y) {
  if (x != y) return T(0);
  return T(1) / hahn_weight_reduced(alpha, beta, M, x);
}

template <class T>
std::pair<T, T> hahn_M_recurrence(const T& alpha, const T& beta, int M, int k, int x) {
  if (M < 1 || k < 0 || k > M - 1 || x < 0 || x > M) throw DomainError("hahn_M_recurrence: index out of range");
  T lhs = T(0);
  if (x >= 1) lhs += T(x) * hahn_series(alpha, beta, M - 1, k, x - 1);
  if (x <= M - 1) lhs += T(M - x) * hahn_series(alpha, beta, M - 1, k, x);
  return {lhs, T(M) * hahn_series(alpha, beta, M, k, x)};
}

#define GTFLOW_HAHN_INSTANTIATE(T)                                                  \
  template T hahn_series<T>(const T&, const T&, int, int, int);                     \
  template T hahn_weight_reduced<T>(const T&, const T&, int, int);                  \
  template T hahn_norm_reduced<T>(const T&, const T&, int, int);                    \
  template T hahn_inner_reduced<T>(const T&, const T&, int, int, int);              \
  template T hahn_dual_sum<T>(const T&, const T&, int, int, int);                   \
  template T hahn_dual_rhs<T>(const T&, const T&, int, int, int);                   \
  template std::pair<T, T> hahn_M_recurrence<T>(const T&, const T&, int, int, int);

GTFLOW_HAHN_INSTANTIATE(double)
GTFLOW_HAHN_INSTANTIATE(Rational)
#undef GTFLOW_HAHN_INSTANTIATE

namespace {

// -x Q_n = A_n Q_{n+1} - (A_n + C_n) Q_n + C_n Q_{n-1}.
double hahn_A(double a, double b, int M, int n) {
  if (n == 0) return (a + 1) * M / (a + b + 2);
  return (n + a + b + 1) * (n + a + 1) * (M - n) / ((2 * n + a + b + 1) * (2 * n + a + b + 2));
}

double hahn_C(double a, double b, int M, int n) {
  if (n == 0) return 0.0;
  return n * (n + a + b + M + 1) * (n + b) / ((2 * n + a + b) * (2 * n + a + b + 1));
}

}  // namespace

HahnBasis::HahnBasis(double alpha, double beta, int M) : alpha_(alpha), beta_(beta), M_(M) {
  if (!(alpha > -1) || !(beta > -1) || M < 0)
    throw ParameterError("HahnBasis requires alpha > -1, beta > -1, M >= 0");
  log_norms_.resize(M + 1);
  const double s = alpha + beta;
  const double log_mfact = std::lgamma(M + 1.0);
  for (int k = 0; k <= M; ++k) {
    double v = (k == 0) ? log_pochhammer(s + 2, M) : log_pochhammer(k + s + 1, M + 1) - std::log(2 * k + s + 1);
    v += log_pochhammer(beta + 1, k) + std::lgamma(k + 1.0) - log_pochhammer(alpha + 1, k);
    v += std::lgamma(M - k + 1.0) - 2 * log_mfact;
    v += std::lgamma(alpha + 1) + std::lgamma(beta + 1);
    log_norms_[k] = v;
  }

  // The orthonormal functions are the eigenvectors of the symmetric Jacobi
  // matrix of the recurrence; its spectrum is exactly {0, ..., M}.
  const int n = M + 1;
  orthonormal_.resize(n, n);
  if (n == 1) {
    orthonormal_(0, 0) = 1.0;
    return;
  }
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int k = 0; k < n; ++k) diag(k) = hahn_A(alpha, beta, M, k) + hahn_C(alpha, beta, M, k);
  for (int k = 0; k + 1 < n; ++k) sub(k) = -std::sqrt(hahn_A(alpha, beta, M, k) * hahn_C(alpha, beta, M, k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("HahnBasis: tridiagonal eigensolver failed");
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  for (int x = 0; x < n; ++x) {
    // Columns come sorted by eigenvalue, i.e. by the lattice site x.
    const double sign = vecs(0, x) < 0 ? -1.0 : 1.0;
    orthonormal_.col(x) = sign * vecs.col(x);
  }
}

void HahnBasis::check(int k, int x) const {
  if (k < 0 || k > M_ || x < 0 || x > M_)
    throw DomainError("Hahn index out of range: k=" + std::to_string(k) + " x=" + std::to_string(x) +
                      " M=" + std::to_string(M_));
}

double HahnBasis::eval(int k, int x) const {
  check(k, x);
  return orthonormal_(k, x) * std::exp(0.5 * (log_norms_[k] - log_weight(x)));
}

double HahnBasis::eval_series(int k, int x) const {
  check(k, x);
  return hahn_series<double>(alpha_, beta_, M_, k, x);
}

double HahnBasis::eval_recurrence(int k, int x) const {
  check(k, x);
  double prev = 0.0, cur = 1.0;
  for (int n = 0; n < k; ++n) {
    const double A = hahn_A(alpha_, beta_, M_, n);
    const double C = hahn_C(alpha_, beta_, M_, n);
    const double next = ((A + C - x) * cur - C * prev) / A;
    prev = cur;
    cur = next;
  }
  return cur;
}

double HahnBasis::log_weight(int x) const {
  check(0, x);
  return std::lgamma(alpha_ + x + 1) + std::lgamma(beta_ + M_ - x + 1) - std::lgamma(x + 1.0) -
         std::lgamma(M_ - x + 1.0);
}

double HahnBasis::norm(int k) const {
  check(k, 0);
  return std::exp(log_norms_[k]);
}

double HahnBasis::orthonormal(int k, int x) const {
  check(k, x);
  return orthonormal_(k, x);
}

HahnBasis model_hahn_basis(const ModelParams& params, int N) {
  return HahnBasis(params.w_prime(), params.z_prime() - params.p(), N + params.p() - 1);
}

double f_eval(const ModelParams& params, int N, int k, int x) { return model_hahn_basis(params, N).orthonormal(k, x); }

// ---------------------------------------------------------------------------
// Jacobi

template <class T>
std::vector<T> jacobi_monomial_coeffs(const T& alpha, const T& beta, int n) {
  std::vector<T> c(n + 1, T(0));
  // (alpha+1)_n/n! sum_j (-n)_j (n+a+b+1)_j / ((a+1)_j j!) (1-x)^j
  T lead = pochhammer(alpha + T(1), n);
  for (int i = 2; i <= n; ++i) lead /= T(i);
  T term = T(1);
  for (int j = 0; j <= n; ++j) {
    // binomial expansion of (1-x)^j
    T binom = T(1);
    for (int m = 0; m <= j; ++m) {
      T v = lead * term * binom;
      c[m] += (m % 2 == 0) ? v : -v;
      binom = binom * T(j - m) / T(m + 1);
    }
    term *= T(j - n) * (T(n + j) + alpha + beta + T(1));
    term /= (alpha + T(j + 1)) * T(j + 1);
  }
  return c;
}

template std::vector<double> jacobi_monomial_coeffs<double>(const double&, const double&, int);
template std::vector<Rational> jacobi_monomial_coeffs<Rational>(const Rational&, const Rational&, int);

JacobiBasis::JacobiBasis(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1) || !(beta > -1)) throw ParameterError("JacobiBasis requires alpha > -1 and beta > -1");
}

double JacobiBasis::eval(int n, double x) const {
  if (n < 0) throw DomainError("jacobi_eval: negative degree");
  const double a = alpha_, b = beta_;
  const double t = 2 * x - 1;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = (a + 1) + (a + b + 2) * (t - 1) / 2;
  for (int k = 1; k < n; ++k) {
    const double s = 2 * k + a + b;
    const double c1 = 2 * (k + 1) * (k + a + b + 1) * s;
    const double c2 = (s + 1) * ((s + 2) * s * t + a * a - b * b);
    const double c3 = 2 * (k + a) * (k + b) * (s + 2);
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double JacobiBasis::eval_series(int n, double x) const {
  if (n < 0) throw DomainError("jacobi_eval: negative degree");
  const double a = alpha_, b = beta_;
  double sum = 0, term = 1;
  for (int j = 0; j <= n; ++j) {
    sum += term;
    term *= (j - n) * (n + j + a + b + 1) / ((a + j + 1) * (j + 1)) * (1 - x);
  }
  return std::exp(log_pochhammer(a + 1, n) - std::lgamma(n + 1.0)) * sum;
}

double JacobiBasis::log_norm(int k) const {
  if (k < 0) throw DomainError("jacobi_norm: negative degree");
  const double a = alpha_, b = beta_;
  // Gamma(k+a+1) Gamma(k+b+1) / ((2k+a+b+1) Gamma(k+a+b+1) k!)
  double den = (k == 0) ? std::lgamma(a + b + 2) : std::log(2 * k + a + b + 1) + std::lgamma(k + a + b + 1);
  return std::lgamma(k + a + 1) + std::lgamma(k + b + 1) - den - std::lgamma(k + 1.0);
}

double JacobiBasis::norm(int k) const { return std::exp(log_norm(k)); }

double JacobiBasis::log_weight(double x) const {
  return beta_ * std::log(x) + alpha_ * std::log1p(-x);
}

double JacobiBasis::recurrence_diag(int n) const {
  const double a = alpha_, b = beta_;
  const double s = 2 * n + a + b;
  const double d = (n == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
  return (1 + d) / 2;
}

double JacobiBasis::recurrence_offdiag_sq(int n) const {
  if (n == 0) return 0.0;
  const double a = alpha_, b = beta_;
  const double s = 2 * n + a + b;
  double v;
  if (n == 1)
    v = 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
  else
    v = 4 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1) * (s - 1));
  return v / 4;
}

void JacobiBasis::orthonormal_polys(double x, std::span<double> out) const {
  if (out.empty()) return;
  double prev = 0.0;
  double cur = std::exp(-0.5 * log_norm(0));
  out[0] = cur;
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const int k = static_cast<int>(n);
    const double next_off = std::sqrt(recurrence_offdiag_sq(k + 1));
    const double off = std::sqrt(recurrence_offdiag_sq(k));
    const double next = ((x - recurrence_diag(k)) * cur - off * prev) / next_off;
    prev = cur;
    cur = next;
    out[n + 1] = cur;
  }
}

void JacobiBasis::orthonormal_functions(double x, std::span<double> out) const {
  if ((x <= 0 && beta_ < 0) || (x >= 1 && alpha_ < 0) || x < 0 || x > 1)
    throw DomainError("orthonormal Jacobi function undefined at x = " + std::to_string(x));
  orthonormal_polys(x, out);
  double sw;
  if ((x == 0 && beta_ > 0) || (x == 1 && alpha_ > 0))
    sw = 0.0;
  else if (x == 0 || x == 1)
    sw = 1.0;  // zero exponent at the endpoint
  else
    sw = std::exp(0.5 * log_weight(x));
  for (double& v : out) v *= sw;
}

JacobiBasis model_jacobi_basis(const ModelParams& params) {
  return JacobiBasis(params.jacobi_alpha(), params.jacobi_beta());
}

double jacobi_eval(const JacobiBasis& basis, int n, double x) { return basis.eval(n, x); }

double jacobi_norm(const JacobiBasis& basis, int k) { return basis.norm(k); }

double j_eval(const ModelParams& params, int k, double x) {
  if (k < 0) throw DomainError("j_eval: negative degree");
  std::vector<double> v(k + 1);
  model_jacobi_basis(params).orthonormal_functions(x, v);
  return v[k];
}

// ---------------------------------------------------------------------------

QuadratureRule gauss_jacobi_rule(double alpha, double beta, int n) {
  if (n < 1) throw DomainError("gauss_jacobi_rule requires n >= 1");
  const JacobiBasis basis(alpha, beta);
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = basis.recurrence_diag(k);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(basis.recurrence_offdiag_sq(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("gauss_jacobi_rule: eigensolver did not converge");
  QuadratureRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  const double mu0 = basis.norm(0);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes.push_back(solver.eigenvalues()(i));
    rule.weights.push_back(mu0 * v0 * v0);
  }
  return rule;
}

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<int> parts, int p) : parts_(std::move(parts)) {
  if (static_cast<int>(parts_.size()) > p) throw DomainError("partition has more than p parts");
  parts_.resize(p, 0);
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw DomainError("partition parts must be non-negative");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("partition parts must be non-increasing");
  }
}

int Partition::size() const {
  int s = 0;
  for (int v : parts_) s += v;
  return s;
}

std::vector<Partition> partitions_up_to(int p, int max_size) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int upper) {
    if (static_cast<int>(cur.size()) == p) {
      out.emplace_back(cur, p);
      return;
    }
    for (int v = 0; v <= std::min(upper, remaining); ++v) {
      cur.push_back(v);
      rec(remaining - v, v);
      cur.pop_back();
    }
  };
  rec(max_size, max_size);
  return out;
}

namespace {

std::vector<int> shifted_degrees(const Partition& lambda) {
  const int p = lambda.length();
  std::vector<int> deg(p);
  for (int i = 0; i < p; ++i) deg[i] = lambda[i] + p - 1 - i;
  return deg;
}

}  // namespace

double multidim_jacobi_divided(const ModelParams& params, const Partition& lambda, std::span<const double> xs) {
  const int p = lambda.length();
  if (static_cast<int>(xs.size()) != p) throw DomainError("multidim_jacobi: need exactly p coordinates");
  const auto deg = shifted_degrees(lambda);
  const int max_deg = deg.empty() ? 0 : deg[0];
  // h[j][k] = complete homogeneous symmetric polynomial of degree k in x_1..x_j.
  std::vector<std::vector<double>> h(p + 1, std::vector<double>(max_deg + 1, 0.0));
  h[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    h[j][0] = 1.0;
    for (int k = 1; k <= max_deg; ++k) h[j][k] = h[j - 1][k] + xs[j - 1] * h[j][k - 1];
  }
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i) {
    const auto c = jacobi_monomial_coeffs<double>(params.jacobi_alpha(), params.jacobi_beta(), deg[i]);
    for (int j = 1; j <= p; ++j) {
      double dd = 0;
      for (int e = j - 1; e <= deg[i]; ++e) dd += c[e] * h[j][e - j + 1];
      m(i, j - 1) = dd;
    }
  }
  return p == 0 ? 1.0 : m.determinant();
}

double multidim_jacobi(const ModelParams& params, const Partition& lambda, std::span<const double> xs) {
  const int p = lambda.length();
  if (static_cast<int>(xs.size()) != p) throw DomainError("multidim_jacobi: need exactly p coordinates");
  double vdm = 1.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < i; ++j) {
      if (std::abs(xs[i] - xs[j]) < 1e-9) return multidim_jacobi_divided(params, lambda, xs);
      vdm *= xs[i] - xs[j];
    }
  const JacobiBasis basis = model_jacobi_basis(params);
  const auto deg = shifted_degrees(lambda);
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = basis.eval(deg[i], xs[j]);
  return m.determinant() / vdm;
}

}  // namespace gtflow
