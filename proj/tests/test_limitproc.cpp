#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gtflow/ensembles.hpp"
#include "gtflow/limitproc.hpp"
#include "gtflow/orthopoly.hpp"
#include "gtflow/polynomial.hpp"
#include "gtflow/rng.hpp"

using namespace gtflow;

namespace {

constexpr double kTol = 1e-12;

// int_0^1 g(u) du for g = weight x polynomial, with the model's Gauss-Jacobi rule.
template <class G>
double weighted_integral(const ModelParams& P, int nodes, G&& g) {
  const auto rule = gauss_jacobi_rule(P.jacobi_alpha(), P.jacobi_beta(), nodes);
  const JacobiBasis b = model_jacobi_basis(P);
  double s = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    s += rule.weights[i] * g(u) / std::exp(b.log_weight(u));
  }
  return s;
}

}  // namespace

TEST_CASE("eigenvalue schedule") {
  const ModelParams P(2, 2, 0);
  CHECK(eigen_K(P, 0) == 0);
  CHECK(eigen_K(P, 1) == 2);
  CHECK(total_K(P) == 2);
  CHECK(total_K_closed(P) == 2);
  RngStream rng(3, 0);
  for (int p = 1; p <= 6; ++p)
    for (int r = 0; r < 10; ++r) {
      const ModelParams Q(p, p - 1 + 0.01 + 5 * rng.uniform(), -0.99 + 4 * rng.uniform());
      CHECK(total_K_closed(Q) == doctest::Approx(total_K(Q)).epsilon(1e-13));
    }
  for (int p = 1; p <= 4; ++p) {
    const ModelParams E(p, p + 1, 2, Mode::exact);
    CHECK(total_K_exact(E) == total_K_closed_exact(E));
  }
}

TEST_CASE("spectral gap") {
  for (int p = 1; p <= 4; ++p) {
    const ModelParams P(p, p - 0.5, -0.5);
    for (const auto& lambda : partitions_up_to(p, 6)) {
      const double c = generator_eigenvalue(P, lambda);
      if (lambda.is_zero())
        CHECK(c == 0);
      else
        CHECK(c < 0);
    }
  }
}

TEST_CASE("heat kernel against independent high-precision values") {
  // tests/oracles/frozen_values.py: mpmath Jacobi polynomials, quadrature norms, 40 digits.
  const ModelParams P(1, 2, 0.5);
  CHECK(heat_kernel(P, 0.5, 0.3, 0.6, kTol) == doctest::Approx(1.205915972430952292).epsilon(1e-10));
  CHECK(heat_kernel(P, 0.1, 0.25, 0.7, kTol) == doctest::Approx(0.2528608191634316553).epsilon(1e-10));
}

TEST_CASE("heat kernel properties") {
  const ModelParams P(1, 2, 0.5);
  CHECK_THROWS_AS(HeatKernel(P, 0.0, kTol), DomainError);
  CHECK_THROWS_AS(HeatKernel(P, -1.0, kTol), DomainError);
  const HeatKernel h(P, 0.3, kTol);
  CHECK(h.truncation() > 1);
  CHECK(h.tail_bound() < kTol);
  for (double x : {0.1, 0.4, 0.85})
    for (double y : {0.2, 0.5, 0.97}) CHECK(h(x, y) == doctest::Approx(h(y, x)).epsilon(1e-14));

  const HeatKernel late(P, 50, kTol);
  for (double x : {0.2, 0.7}) CHECK(std::abs(late(x, 0.45) - j_eval(P, 0, x) * j_eval(P, 0, 0.45)) < 1e-10);

  const double t = 0.2, s = 0.3, x = 0.35, y = 0.6;
  const HeatKernel ht(P, t, kTol), hs(P, s, kTol), hts(P, t + s, kTol);
  const double lhs = weighted_integral(P, 120, [&](double u) { return ht(x, u) * hs(u, y); });
  CHECK(std::abs(lhs - hts(x, y)) < 1e-8);
}

TEST_CASE("transition density") {
  const ModelParams P2(2, 3, 1);
  const double X[] = {0.2, 0.55}, Y[] = {0.35, 0.8};
  CHECK(transition_density(P2, 0.4, X, Y, kTol) == doctest::Approx(5.003028120653208456).epsilon(1e-10));
  CHECK(transition_density(P2, 3, X, Y, kTol) == doctest::Approx(5.307119946957095402).epsilon(1e-10));

  const ModelParams uni(1, 1, 0);
  const double x[] = {0.3}, y[] = {0.8};
  CHECK(transition_density(uni, 0.25, x, y, kTol) == doctest::Approx(heat_kernel(uni, 0.25, 0.3, 0.8, kTol)));

  for (const auto& P : {ModelParams(1, 2, 0.5), ModelParams(2, 3, 1)})
    for (double t : {0.1, 1.0}) {
      const HeatKernel h(P, t, kTol);
      const std::vector<double> from = P.p() == 1 ? std::vector<double>{0.4} : std::vector<double>{0.3, 0.65};
      const double mass = transition_expectation(h, from, [](std::span<const double>) { return 1.0; }, 0);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }

  const LimitEnsemble lim(P2);
  CHECK(std::abs(transition_density(P2, 50, X, Y, kTol) - lim.density(Y)) < 1e-8);

  const double unordered[] = {0.8, 0.35}, tied[] = {0.5, 0.5};
  CHECK(transition_density(P2, 0.4, X, unordered, kTol) == 0);
  CHECK(transition_density(P2, 0.4, X, tied, kTol) == 0);
  CHECK_THROWS_AS(transition_density(P2, 0.4, tied, Y, kTol), DomainError);
}

TEST_CASE("stationarity of the limit density") {
  const ModelParams P(2, 3, 1);
  for (const auto& Y : {std::vector<double>{0.2, 0.5}, std::vector<double>{0.4, 0.9}}) {
    const auto [lhs, rhs] = stationarity_check(P, 0.3, Y, kTol);
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("multi-time densities") {
  const ModelParams P(2, 3, 1);
  const LimitEnsemble lim(P);
  const std::vector<double> X1{0.2, 0.55}, X2{0.35, 0.8}, X3{0.1, 0.6};
  const double t1[] = {0.7};
  CHECK(multi_time_density(P, t1, {X1}, kTol) == doctest::Approx(lim.density(X1)).epsilon(1e-12));
  const double t2[] = {0.1, 0.5};
  CHECK(multi_time_density(P, t2, {X1, X2}, kTol) ==
        doctest::Approx(lim.density(X1) * transition_density(P, 0.4, X1, X2, kTol)).epsilon(1e-10));
  const double t3[] = {0.0, 0.3, 0.45};
  CHECK(multi_time_density(P, t3, {X1, X2, X3}, kTol) ==
        doctest::Approx(multi_time_density_chain(P, t3, {X1, X2, X3}, kTol)).epsilon(1e-10));

  const ModelParams Q(1, 2, 0.5);
  const double times[] = {0.0, 0.25};
  const double marg = weighted_integral(Q, 120, [&](double y) {
    return multi_time_density(Q, times, {{0.3}, {y}}, kTol);
  });
  const double x[] = {0.3};
  CHECK(std::abs(marg - LimitEnsemble(Q).density(x)) < 1e-7);
}

TEST_CASE("extended kernel and correlation functions") {
  const ModelParams P(2, 3, 1);
  for (double x : {0.2, 0.6})
    for (double y : {0.3, 0.9}) {
      double s = 0;
      for (int i = 0; i < 2; ++i) s += j_eval(P, i, x) * j_eval(P, i, y);
      CHECK(extended_kernel(P, x, 0.4, y, 0.4, kTol) == doctest::Approx(s).epsilon(1e-13));
    }
  const ModelParams uni(1, 1, 0);
  CHECK(extended_kernel(uni, 0.3, 1.0, 0.3, 1.0, kTol) == doctest::Approx(1.0));
  CHECK(one_point_density(uni, 0.77) == doctest::Approx(1.0));

  const double trace = weighted_integral(P, 40, [&](double x) { return extended_kernel(P, x, 0, x, 0, kTol); });
  CHECK(trace == doctest::Approx(2.0).epsilon(1e-8));

  // Frozen: rho_1(0.37) and rho_2((0.3, 0), (0.6, 0.3)) from tests/oracles/frozen_values.py.
  CHECK(one_point_density(P, 0.37) == doctest::Approx(1.8713268).epsilon(1e-12));
  CHECK(correlation_fn(P, {{0.3, 0.0}}, kTol) == doctest::Approx(one_point_density(P, 0.3)).epsilon(1e-14));
  CHECK(correlation_fn(P, {{0.3, 0.0}, {0.6, 0.3}}, kTol) == doctest::Approx(3.917057265595600389).epsilon(1e-10));

  RngStream rng(17, 0);
  for (int r = 0; r < 100; ++r) {
    const double x = 0.02 + 0.96 * rng.uniform(), y = 0.02 + 0.96 * rng.uniform();
    const double rho2 = correlation_fn(P, {{x, 0.5}, {y, 0.5}}, kTol);
    CHECK(rho2 >= -1e-12);
    CHECK(rho2 <= one_point_density(P, x) * one_point_density(P, y) + 1e-12);
  }
}

TEST_CASE("semigroup eigenfunctions") {
  const ModelParams P2(2, 3, 1);
  const double X[] = {0.25, 0.7};
  {
    const auto [lhs, rhs] = semigroup_apply_check(P2, Partition({0, 0}, 2), 0.5, X, kTol);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(rhs == doctest::Approx(multidim_jacobi(P2, Partition({0, 0}, 2), X)).epsilon(1e-12));
  }
  {
    const auto [lhs, rhs] = semigroup_apply_check(P2, Partition({1, 0}, 2), 0.5, X, kTol);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(rhs), 1.0));
  }
  const ModelParams P1(1, 2, 0.5);
  const double x[] = {0.4};
  for (int k = 0; k <= 3; ++k) {
    const auto [lhs, rhs] = semigroup_apply_check(P1, Partition({k}, 1), 0.3, x, kTol);
    CHECK(rhs == doctest::Approx(std::exp(-0.3 * eigen_K(P1, k)) * jacobi_eval(model_jacobi_basis(P1), k, 0.4))
                     .epsilon(1e-12));
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(rhs), 1.0));
  }
}

TEST_CASE("generator: constants and one-variable Jacobi operator") {
  const ModelParams P(2, 3, 1, Mode::exact);
  const Rational pt[] = {ratio(1, 5), ratio(2, 3)};
  const auto g = generator_apply_exact(P, Polynomial::constant(2, Rational(1)), pt);
  CHECK(g.h_transform == 0);
  CHECK(g.drift == 0);

  const ModelParams Q(1, 2, 0, Mode::exact);
  const Rational a = Q.z_prime_exact() - 1, b = Q.w_prime_exact();
  for (int i = 0; i <= 6; ++i) {
    const Polynomial jac = jacobi_polynomial(a, b, i, 1, 0);
    CHECK(jacobi_operator(Q, jac) == Rational(-1) * eigen_K_exact(Q, i) * jac);
  }
}

TEST_CASE("generator eigenfunctions are exact") {
  for (const auto& P : {ModelParams(2, 3, 1, Mode::exact), ModelParams(2, 4, 0, Mode::exact)})
    for (const auto& lambda : partitions_up_to(2, 3)) {
      const Polynomial J = multidim_jacobi_polynomial(P, lambda);
      CHECK(generator_polynomial(P, J) == generator_eigenvalue_exact(P, lambda) * J);
    }
  const ModelParams F(2, 3, 1);
  const Polynomial J = multidim_jacobi_polynomial(F.with_mode(Mode::exact), Partition({2, 0}, 2));
  const double pts[][2] = {{0.13, 0.71}, {0.4, 0.45}, {0.6, 0.6}};
  for (const auto& X : pts) {
    const double want = generator_eigenvalue(F, Partition({2, 0}, 2)) * J.evaluate(std::span<const double>(X, 2));
    CHECK(generator_apply(F, J, std::span<const double>(X, 2)) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("generator forms agree with the factor-2 drift and not without it") {
  for (int p = 1; p <= 3; ++p) {
    const ModelParams P(p, p + 1, 1, Mode::exact);
    std::vector<Rational> X;
    for (int i = 0; i < p; ++i) X.push_back(ratio(2 * i + 1, 2 * p + 3));
    for (const auto& m : monomials_up_to(p, 4)) {
      const auto g = generator_apply_exact(P, m, X);
      CHECK_FALSE(g.coincident);
      CHECK(g.h_transform == g.drift);
      CHECK(g.drift == generator_drift_form(P, m, X, Rational(2)));
    }
  }
  const ModelParams P(2, 3, 1, Mode::exact);
  const Rational X[] = {ratio(1, 4), ratio(2, 3)};
  const Polynomial f = Polynomial::variable(2, 0);
  CHECK(generator_drift_form(P, f, X, Rational(1)) != generator_apply_exact(P, f, X).h_transform);
}

TEST_CASE("generator at coincident points uses the drift form") {
  const ModelParams P(2, 3, 1, Mode::exact);
  const Polynomial f = Polynomial::variable(2, 0) * Polynomial::variable(2, 1);
  const Rational X[] = {ratio(1, 3), ratio(1, 3)};
  const auto g = generator_apply_exact(P, f, X);
  CHECK(g.coincident);
  const Rational Y[] = {ratio(1, 3), ratio(1, 3) + ratio(1, 1000000)};
  const double near = generator_apply(P.with_mode(Mode::floating), f, std::vector<double>{Y[0].get_d(), Y[1].get_d()});
  CHECK(g.drift.get_d() == doctest::Approx(near).epsilon(1e-5));
}

TEST_CASE("Doob transform identities") {
  const ModelParams P1(1, 2, 3, Mode::exact);
  CHECK(vandermonde_eigen_residual(P1).is_zero());
  const ModelParams P(2, 2, 0, Mode::exact);
  const Polynomial V = vandermonde_polynomial(2);
  CHECK(jacobi_operator(P, V) == Rational(-2) * V);
  for (int p = 2; p <= 3; ++p)
    for (const auto& Q : {ModelParams(p, p, 0, Mode::exact), ModelParams(p, p + 3, 2, Mode::exact)})
      CHECK(vandermonde_eigen_residual(Q).is_zero());
  CHECK(vandermonde_harmonic_residual(3, 0, 0, 0).is_zero());
  CHECK(vandermonde_harmonic_residual(3, 1, 2, 3).is_zero());
  CHECK(vandermonde_harmonic_residual(3, ratio(-1, 2), ratio(1, 3), ratio(5, 7)).is_zero());

  const ModelParams F(3, 4, 1);
  const double X[] = {0.1, 0.45, 0.8};
  const auto [r1, r2] = doob_identities_check(F, X, 0.3, -0.2, 0.7);
  CHECK(r1 < 1e-10);
  CHECK(r2 < 1e-10);
}

TEST_CASE("grid dumps") {
  std::ostringstream os;
  write_grid_csv(os, {{0.2, 0.3, 1.5}});
  CHECK(os.str().rfind("x,y,value\n", 0) == 0);
  const HeatKernel h(ModelParams(1, 2, 0.5), 0.5, kTol);
  const auto meta = grid_metadata(h);
  for (const char* key : {"p", "zPrime", "wPrime", "t", "truncation", "tol"}) CHECK(meta.contains(key));
}
