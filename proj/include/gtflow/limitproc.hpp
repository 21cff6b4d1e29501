#pragma once

// The N -> infinity objects: eigenvalue schedule, heat kernel and transition
// density of the non-colliding Jacobi diffusion, multi-time densities, the
// extended space-time kernel, semigroup and generator eigen-relations.

#include <functional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gtflow/numeric.hpp"
#include "gtflow/orthopoly.hpp"
#include "gtflow/params.hpp"
#include "gtflow/polynomial.hpp"

namespace gtflow {

/// K(i) = i (i + w' + z' + 1 - p).
double eigen_K(const ModelParams& params, int i);
Rational eigen_K_exact(const ModelParams& params, int i);

/// sum_{i<p} K(i), and the closed form p(p-1)/2 (w' + z' - (p-2)/3).
double total_K(const ModelParams& params);
double total_K_closed(const ModelParams& params);
Rational total_K_exact(const ModelParams& params);
Rational total_K_closed_exact(const ModelParams& params);

/// sum_i K(p-i) - K(lambda_i + p - i): eigenvalue of the generator on Jac^lambda.
double generator_eigenvalue(const ModelParams& params, const Partition& lambda);
Rational generator_eigenvalue_exact(const ModelParams& params, const Partition& lambda);

/// Series sum_i e^{-t K(i)} j^i(x) j^i(y), truncated once the bound
/// e^{-t K(i)} M_i^2 over a window of 20 further terms drops below tol, with M_i the
/// sup of |j^i| on [0.02, 0.98].
class HeatKernel {
 public:
  static constexpr double kMargin = 0.02;
  static constexpr int kMaxTerms = 2000;
  static constexpr int kWindow = 20;

  HeatKernel(const ModelParams& params, double t, double tol);

  const ModelParams& params() const { return params_; }
  double t() const { return t_; }
  double tol() const { return tol_; }
  int truncation() const { return L_; }
  double tail_bound() const { return tail_; }
  double decay(int i) const { return decay_.at(i); }

  double operator()(double x, double y) const { return sum_from(0, x, y); }

  /// sum_{i >= from} e^{-tK(i)} j^i(x) j^i(y); points outside the compact margin
  /// get extra terms until the actual terms are negligible.
  double sum_from(int from, double x, double y) const;

  /// j^0(x), ..., j^{L-1}(x).
  std::vector<double> functions(double x) const;

 private:
  ModelParams params_;
  double t_;
  double tol_;
  JacobiBasis basis_;
  std::vector<double> decay_;
  int L_ = 0;
  double tail_ = 0;
};

/// sup_{x in [0.02, 0.98]} |j^i(x)| for i < count (cached per (alpha, beta)).
std::vector<double> jacobi_function_bounds(const JacobiBasis& basis, int count);

double heat_kernel(const ModelParams& params, double t, double x, double y, double tol);

/// sqrt(rho(Y)/rho(X)) e^{tK} det[J^t(x_i, y_j)]; zero when Y has coincident points.
double transition_density(const HeatKernel& kernel, std::span<const double> X, std::span<const double> Y);
double transition_density(const ModelParams& params, double t, std::span<const double> X, std::span<const double> Y,
                          double tol);

/// sqrt(rho(X^1)) prod_j det[J^{dt_j}(X^j, X^{j+1})] / e^{-dt_j K} sqrt(rho(X^n)).
double multi_time_density(const ModelParams& params, std::span<const double> times,
                          const std::vector<std::vector<double>>& configs, double tol);
/// rho(X^1) prod_j P^{dt_j}(X^{j+1} | X^j).
double multi_time_density_chain(const ModelParams& params, std::span<const double> times,
                                const std::vector<std::vector<double>>& configs, double tol);

/// Two-branch space-time kernel: sum_{i<p} e^{(t-s)K(i)} j^i(x) j^i(y) for t >= s,
/// -sum_{i>=p} e^{(t-s)K(i)} j^i(x) j^i(y) for t < s.
double extended_kernel(const ModelParams& params, double x, double t, double y, double s, double tol);

/// det[Ker(x_i, t_i; x_j, t_j)] over points (x, t).
double correlation_fn(const ModelParams& params, const std::vector<std::pair<double, double>>& points, double tol);

/// sum_{i<p} j^i(x)^2.
double one_point_density(const ModelParams& params, double x);

// ---------------------------------------------------------------------------
// Chamber quadrature

/// int_{W_p} f(Y) P^t(Y|X) dY. The integrand is weight x polynomial in Y, so the
/// symmetrized Gauss-Jacobi rule is exact once it resolves `f_degree` (per variable).
double transition_expectation(const HeatKernel& kernel, std::span<const double> X,
                              const std::function<double(std::span<const double>)>& f, int f_degree, int nodes = 0);

/// (int Jac^lambda(Y) P^t(Y|X) dY, c(lambda, t) Jac^lambda(X)).
std::pair<double, double> semigroup_apply_check(const ModelParams& params, const Partition& lambda, double t,
                                                std::span<const double> X, double tol);

/// (int rho(X) P^t(Y|X) dX, rho(Y)).
std::pair<double, double> stationarity_check(const ModelParams& params, double t, std::span<const double> Y,
                                             double tol);

// ---------------------------------------------------------------------------
// Generator calculus (exact)

/// Jac^n_{alpha,beta} in variable `var` of an nvars-variable polynomial ring.
Polynomial jacobi_polynomial(const Rational& alpha, const Rational& beta, int n, int nvars, int var);

/// det[Jac^{lambda_i+p-i}(x_j)] / V(X) as an exact polynomial.
Polynomial multidim_jacobi_polynomial(const ModelParams& params, const Partition& lambda);

/// sum_i x_i(1-x_i) d^2/dx_i^2 + (w'+1-(w'+z'-p+2) x_i) d/dx_i, in f.nvars() variables.
Polynomial jacobi_operator(const ModelParams& params, const Polynomial& f);

/// V^{-1} D(V f) + K f as a polynomial; requires V f's image to be divisible by V
/// (true for symmetric f).
Polynomial generator_polynomial(const ModelParams& params, const Polynomial& f);

struct GeneratorValue {
  Rational h_transform;  // V^{-1} D(V f) + K f at X
  Rational drift;        // D f + 2 sum_i x_i(1-x_i) sum_{j!=i} (x_i-x_j)^{-1} d_i f at X
  bool coincident = false;  // coordinates collide; only the drift form (as a polynomial) was evaluated
};

/// Both generator forms at a rational point.
GeneratorValue generator_apply_exact(const ModelParams& params, const Polynomial& f, std::span<const Rational> X);

/// Float evaluation of G f at X (h-transform form, drift form at coincident points).
double generator_apply(const ModelParams& params, const Polynomial& f, std::span<const double> X);

/// The drift form with interaction coefficient `factor`; the generator is factor 2.
Rational generator_drift_form(const ModelParams& params, const Polynomial& f, std::span<const Rational> X,
                              const Rational& factor);

/// sum_i (x_i^2 + a x_i + b) d^2/dx_i^2 + (-(2/3)(p-2) x_i + c) d/dx_i.
Polynomial harmonic_test_operator(const Polynomial& f, const Rational& a, const Rational& b, const Rational& c);

/// Exact residual polynomials D V + K V and G_{a,b,c} V (both identically zero).
Polynomial vandermonde_eigen_residual(const ModelParams& params);
Polynomial vandermonde_harmonic_residual(int p, const Rational& a, const Rational& b, const Rational& c);

/// (|D V(X) + K V(X)| / |K V(X)|-scale, |G_{a,b,c} V(X)| / scale) evaluated in floating point.
std::pair<double, double> doob_identities_check(const ModelParams& params, std::span<const double> X, double a,
                                                double b, double c);

// ---------------------------------------------------------------------------
// Dumps

struct GridValue {
  double x;
  double y;
  double value;
};

/// x,y,value
void write_grid_csv(std::ostream& os, const std::vector<GridValue>& grid);
/// {p, zPrime, wPrime, t, truncation, tol}
nlohmann::json grid_metadata(const HeatKernel& kernel);

}  // namespace gtflow
