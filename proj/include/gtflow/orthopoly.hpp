#pragma once

// Special-function engine: Pochhammer symbols, Hahn polynomials on {0..M}
// (3F2 series, Q_k(0) = 1), Jacobi polynomials P_n(2x-1) on (0,1), their norms
// and orthonormalized versions, and Gauss-Jacobi quadrature.

#include <Eigen/Dense>

#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "gtflow/numeric.hpp"
#include "gtflow/params.hpp"

namespace gtflow {

// GMP expression templates collapse to Rational.
template <class E>
using value_of = std::conditional_t<std::is_arithmetic_v<E>, E, Rational>;

/// (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
template <class T>
value_of<T> pochhammer(const T& a, int k) {
  using V = value_of<T>;
  const V base(a);
  V r(1);
  for (int i = 0; i < k; ++i) r *= base + V(i);
  return r;
}

/// log (a)_k for a > 0.
double log_pochhammer(double a, int k);

// ---------------------------------------------------------------------------
// Hahn polynomials Q_k(x; alpha, beta, M) = 3F2(-k, -x, k+alpha+beta+1; -M, alpha+1; 1)

/// Terminating hypergeometric series; exact for T = Rational.
template <class T>
T hahn_series(const T& alpha, const T& beta, int M, int k, int x);

/// Weight and squared norm with the common factor Gamma(alpha+1) Gamma(beta+1)
/// removed, so that both are rational for rational (alpha, beta):
///   weight(x) = (alpha+1)_x (beta+1)_{M-x} / (x! (M-x)!).
template <class T>
T hahn_weight_reduced(const T& alpha, const T& beta, int M, int x);

/// Closed-form squared norm (reduced as above).
template <class T>
T hahn_norm_reduced(const T& alpha, const T& beta, int M, int k);

/// sum_x weight(x) Q_k(x) Q_l(x) by direct summation (reduced weight).
template <class T>
T hahn_inner_reduced(const T& alpha, const T& beta, int M, int k, int l);

/// Left side of the dual orthogonality relation: sum_k Q_k(x) Q_k(y) / norm(k).
template <class T>
T hahn_dual_sum(const T& alpha, const T& beta, int M, int x, int y);

/// Right side: delta_xy x! (M-x)! / ((alpha+1)_x (beta+1)_{M-x}).
template <class T>
T hahn_dual_rhs(const T& alpha, const T& beta, int M, int x, int y);

/// (x Q_k(x-1; M-1) + (M-x) Q_k(x; M-1),  M Q_k(x; M)); requires 1 <= M, k <= M-1.
template <class T>
std::pair<T, T> hahn_M_recurrence(const T& alpha, const T& beta, int M, int k, int x);

/// Float Hahn basis on {0..M} with eagerly computed norms and orthonormal functions.
class HahnBasis {
 public:
  HahnBasis(double alpha, double beta, int M);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int M() const { return M_; }

  // Q_k(x) recovered from the orthonormal matrix. The series and the forward
  // recurrence lose digits quickly once k exceeds about M/2.
  double eval(int k, int x) const;
  double eval_series(int k, int x) const;
  double eval_recurrence(int k, int x) const;

  /// Orthogonality weight Gamma(alpha+x+1) Gamma(beta+M-x+1) / (Gamma(x+1) Gamma(M-x+1)).
  double log_weight(int x) const;

  /// Squared norm against log_weight (closed form).
  double norm(int k) const;
  double log_norm(int k) const { return log_norms_.at(k); }

  /// Q_k(x) sqrt(weight(x)) / sqrt(norm(k)); rows k, columns x of an orthogonal matrix.
  double orthonormal(int k, int x) const;
  const Eigen::MatrixXd& orthonormal_matrix() const { return orthonormal_; }

 private:
  void check(int k, int x) const;

  double alpha_;
  double beta_;
  int M_;
  std::vector<double> log_norms_;
  Eigen::MatrixXd orthonormal_;
};

/// f^k_N(x) for the model: the Hahn basis with alpha = w', beta = z'-p, M = N+p-1.
HahnBasis model_hahn_basis(const ModelParams& params, int N);
double f_eval(const ModelParams& params, int N, int k, int x);

// ---------------------------------------------------------------------------
// Jacobi polynomials on (0,1): Jac^n_{alpha,beta}(x) = (alpha+1)_n / n! 2F1(-n, n+alpha+beta+1; alpha+1; 1-x),
// orthogonal against (1-x)^alpha x^beta.

/// Monomial coefficients c_0..c_n of Jac^n in x; exact for T = Rational.
template <class T>
std::vector<T> jacobi_monomial_coeffs(const T& alpha, const T& beta, int n);

class JacobiBasis {
 public:
  JacobiBasis(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double eval(int n, double x) const;
  double eval_series(int n, double x) const;

  /// Squared norm in L2((0,1), (1-x)^alpha x^beta dx).
  double norm(int k) const;
  double log_norm(int k) const;
  double log_weight(double x) const;

  /// Orthonormal polynomials with positive leading coefficient, degrees 0..out.size()-1.
  void orthonormal_polys(double x, std::span<double> out) const;
  /// j^k(x) = p_k(x) sqrt(weight(x)), degrees 0..out.size()-1; requires 0 < x < 1
  /// unless both exponents are non-negative.
  void orthonormal_functions(double x, std::span<double> out) const;

  /// Three-term recurrence of the monic polynomials on (0,1):
  /// x P_n = P_{n+1} + diag(n) P_n + offdiag_sq(n) P_{n-1}.
  double recurrence_diag(int n) const;
  double recurrence_offdiag_sq(int n) const;

 private:
  double alpha_;
  double beta_;
};

JacobiBasis model_jacobi_basis(const ModelParams& params);
double jacobi_eval(const JacobiBasis& basis, int n, double x);
double jacobi_norm(const JacobiBasis& basis, int k);
double j_eval(const ModelParams& params, int k, double x);

// ---------------------------------------------------------------------------

/// Gauss rule for the weight x^beta (1-x)^alpha on (0,1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha = 0;
  double beta = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Golub-Welsch construction from the Jacobi recurrence.
QuadratureRule gauss_jacobi_rule(double alpha, double beta, int n);

/// Sum over the tensor grid rule^p of prod(weights) * f(points). Chamber integrals
/// of symmetric integrands are this sum divided by p!.
template <class F>
double cube_quadrature(const QuadratureRule& rule, int p, F&& f) {
  const std::size_t n = rule.size();
  std::vector<std::size_t> idx(p, 0);
  std::vector<double> pts(p);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < p; ++i) {
      pts[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    total += w * f(std::span<const double>(pts));
    int i = p - 1;
    while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
    if (i < 0) break;
  }
  return total;
}

/// Node count used when integrands are weight x polynomial of degree `max_degree`.
inline int default_quadrature_order(int max_degree) { return 4 * max_degree + 16; }

// ---------------------------------------------------------------------------

/// lambda_1 >= ... >= lambda_p >= 0, padded with zeros to exactly p parts.
class Partition {
 public:
  Partition(std::vector<int> parts, int p);

  int length() const { return static_cast<int>(parts_.size()); }
  int size() const;  // |lambda|
  bool is_zero() const { return size() == 0; }
  std::span<const int> parts() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// Every partition with at most p parts and |lambda| <= max_size.
std::vector<Partition> partitions_up_to(int p, int max_size);

/// det[Jac^{lambda_i+p-i}(x_j)] / prod_{i>j} (x_i - x_j) with alpha = z'-p, beta = w'.
/// Near-coincident points (|x_i - x_j| < 1e-9) switch to the divided-difference form.
double multidim_jacobi(const ModelParams& params, const Partition& lambda, std::span<const double> xs);

/// Divided-difference form det[phi_i[x_1..x_j]], valid for any (also confluent) points.
double multidim_jacobi_divided(const ModelParams& params, const Partition& lambda, std::span<const double> xs);

}  // namespace gtflow
