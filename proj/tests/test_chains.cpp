#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "gtflow/chains.hpp"
#include "gtflow/limitproc.hpp"
#include "gtflow/orthopoly.hpp"

using namespace gtflow;

namespace {

Signature sig(std::vector<int> v) { return Signature(std::move(v)); }

// Upper 1% point of chi-square with df degrees of freedom (Wilson-Hilferty).
double chi2_crit_1pct(int df) {
  const double z = 2.3263478740408408;
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1 - a + z * std::sqrt(a), 3);
}

}  // namespace

TEST_CASE("cotransition examples") {
  CHECK(cotransition(sig({1}), sig({1, 0})) == ratio(1, 2));
  CHECK(cotransition(sig({0}), sig({1, 0})) == ratio(1, 2));
  CHECK(cotransition(sig({2}), sig({1, 0})) == 0);
  for (int N = 1; N <= 7; ++N)
    for (const auto& mu : signatures_in_box(N, 2)) {
      Rational s(0);
      for (const auto& l : interlacing_predecessors(mu)) s += cotransition(l, mu);
      CHECK(s == 1);
    }
}

TEST_CASE("up transition examples") {
  const ModelParams P(1, 1, 0, Mode::exact);
  const ParticleConfig X({0}, 2, 1);
  CHECK(up_transition_exact(P, 2, X, ParticleConfig({0}, 3, 1)) == ratio(3, 4));
  CHECK(up_transition_exact(P, 2, X, ParticleConfig({1}, 3, 1)) == ratio(1, 4));
  CHECK(up_transition_exact(P, 2, X, ParticleConfig({2}, 3, 1)) == 0);
  CHECK(up_transition(P, 2, X, ParticleConfig({1}, 3, 1)) == doctest::Approx(0.25));
}

TEST_CASE("up transitions: stochastic, generic, determinantal") {
  for (int p = 1; p <= 3; ++p)
    for (int N = 0; N <= 4; ++N) {
      const ModelParams P(p, p + 1, 2, Mode::exact);
      const auto lower = configs_in_box(N, p), upper = configs_in_box(N + 1, p);
      for (const auto& X : lower) {
        Rational s(0);
        for (const auto& Xp : upper) {
          const Rational u = up_transition_exact(P, N, X, Xp);
          s += u;
          CHECK(u == up_transition_generic(P, X, Xp));
          CHECK(up_transition_determinantal_exact(P, N, X, Xp).equals(u));
          CHECK(up_transition_determinantal(P, N, X, Xp) == doctest::Approx(u.get_d()).epsilon(1e-10).scale(1.0));
        }
        CHECK(s == 1);
      }
    }
}

TEST_CASE("down transitions: cotransition, determinantal, Bayes") {
  for (int p = 1; p <= 3; ++p)
    for (int N = 0; N <= 4; ++N) {
      const ModelParams P(p, p, 1, Mode::exact);
      const DiscreteEnsemble e0(P, N), e1(P, N + 1);
      for (const auto& X : configs_in_box(N + 1, p)) {
        Rational s(0);
        for (const auto& Xp : configs_in_box(N, p)) {
          const Rational d = down_transition_exact(Xp, X);
          s += d;
          CHECK(d == cotransition(from_particles(Xp), from_particles(X)));
          CHECK(down_transition_determinantal_exact(P, N, Xp, X).equals(d));
          CHECK(d * e1.prob_exact(X) == up_transition_exact(P, N, Xp, X) * e0.prob_exact(Xp));
        }
        CHECK(s == 1);
      }
    }
}

TEST_CASE("c coefficients") {
  const ModelParams P(2, 3, 1);
  CHECK(c_coeff(P, 10, 0) == 1);
  for (int N : {3, 20})
    for (int i = 0; i < N + 2; ++i) {
      const double c2 = c_coeff(P, N, i) * c_coeff(P, N, i);
      CHECK(c2 == doctest::Approx(1 - eigen_K(P, i) / ((2 + N) * (1 + 3 + N + 1.0))).epsilon(1e-14));
      CHECK(std::exp(log_c_squared(P, N, i)) == doctest::Approx(c2).epsilon(1e-13));
    }
  const ModelParams Q(2, 3, 1, Mode::exact);
  CHECK(c_squared_exact(Q, 4, 1) == (1 - ratio(1, 6)) * (1 + ratio(1, 9)));
}

TEST_CASE("c powers approach the limit decay") {
  const ModelParams P(2, 3, 1);
  const double t = 0.5;
  for (int i = 1; i <= 4; ++i) {
    double prev = 1e9;
    for (int N : {100, 200, 400}) {
      const double k = std::floor(t * N * N);
      const double err = std::abs(std::exp(k * log_c_squared(P, N, i) + t * eigen_K(P, i)) - 1);
      // first-order convergence: doubling N at least nearly halves the error
      CHECK(err < 0.6 * prev);
      prev = err;
    }
  }
}

TEST_CASE("two-diagonal matrix and its spectral factorization") {
  for (int p = 1; p <= 3; ++p)
    for (int N : {1, 7, 25, 40}) {
      const ModelParams P(p, p + 0.75, 0.5);
      const Eigen::MatrixXd v = matrix_vN(P, N);
      CHECK(v.rows() == N + p);
      CHECK(v.cols() == N + p + 1);
      for (Eigen::Index x = 0; x < v.rows(); ++x)
        for (Eigen::Index y = 0; y < v.cols(); ++y)
          if (y != x && y != x + 1) CHECK(v(x, y) == 0);
      CHECK((v - spectral_vN(P, N)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("up-down kernels") {
  const ModelParams P(2, 3.5, 0.5);
  const int N = 6;
  const auto k0 = updown_k_step_kernel(P, N, 0);
  CHECK((k0.matrix - Eigen::MatrixXd::Identity(N + 2, N + 2)).cwiseAbs().maxCoeff() < 1e-12);
  const auto k1 = updown_k_step_kernel(P, N, 1);
  const auto u = updown_step_kernel(P, N);
  CHECK((k1.matrix - u.matrix).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::MatrixXd T0 = config_transition_matrix(P, k0);
  CHECK((T0 - Eigen::MatrixXd::Identity(T0.rows(), T0.cols())).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd T1 = config_transition_matrix(P, u);
  CHECK((T1.rowwise().sum().array() - 1).abs().maxCoeff() < 1e-12);
  CHECK(T1.minCoeff() > -1e-14);
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      const Eigen::MatrixXd a = config_transition_matrix(P, updown_k_step_kernel(P, N, k));
      const Eigen::MatrixXd b = config_transition_matrix(P, updown_k_step_kernel(P, N, l));
      const Eigen::MatrixXd c = config_transition_matrix(P, updown_k_step_kernel(P, N, k + l));
      CHECK((a * b - c).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("exact up-down chain") {
  const ModelParams P(2, 3, 1, Mode::exact);
  for (int N = 0; N <= 4; ++N) {
    const ExactUpDown ud(P, N);
    const DiscreteEnsemble ens(P, N);
    const auto& configs = ud.configs();
    const auto T = ud.matrix(1);
    const auto T2 = ud.matrix(2);
    for (std::size_t a = 0; a < configs.size(); ++a) {
      Rational row(0), stat(0), two(0);
      for (std::size_t b = 0; b < configs.size(); ++b) {
        row += T[a][b];
        stat += ens.prob_exact(configs[b]) * T[b][a];
        CHECK(T[a][b] == ud.composed_transition(configs[a], configs[b]));
        CHECK(ens.prob_exact(configs[a]) * T[a][b] == ens.prob_exact(configs[b]) * T[b][a]);
        Rational ck(0);
        for (std::size_t c = 0; c < configs.size(); ++c) ck += T[a][c] * T[c][b];
        CHECK(ck == T2[a][b]);
      }
      CHECK(row == 1);
      CHECK(stat == ens.prob_exact(configs[a]));
      CHECK(ud.transition(configs[a], configs[a], 0) == 1);
    }
  }
}

TEST_CASE("exact determinant") {
  CHECK(determinant({{Rational(2), Rational(1)}, {Rational(4), Rational(3)}}) == 2);
  CHECK(determinant({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}) == -1);
  CHECK(determinant({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 0);
}

TEST_CASE("up chain paths interlace and are reproducible") {
  const ModelParams P(3, 4, 1);
  RngStream a(99, 3), b(99, 3);
  const auto pa = sample_up_chain(P, 25, a);
  const auto pb = sample_up_chain(P, 25, b);
  REQUIRE(pa.size() == 26);
  CHECK(pa == pb);
  for (std::size_t i = 1; i < pa.size(); ++i) CHECK(particles_interlace(pa[i - 1], pa[i]));
}

TEST_CASE("up chain marginal is uniform in the uniform case") {
  const ModelParams P(1, 1, 0);
  const int n = 100000;
  std::vector<int> counts(3, 0);
  for (int s = 0; s < n; ++s) {
    RngStream rng(2024, s);
    ++counts[sample_up_chain(P, 2, rng).back()[0]];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
  CHECK(chi2 < chi2_crit_1pct(2));
}

TEST_CASE("stationary sampler matches P_N") {
  const ModelParams P(2, 3, 1);
  const int N = 5, n = 60000;
  const DiscreteEnsemble ens(P, N);
  std::map<ParticleConfig, int> counts;
  for (int s = 0; s < n; ++s) {
    RngStream rng(77, s);
    ++counts[sample_stationary(P, N, rng)];
  }
  const auto configs = configs_in_box(N, 2);
  double chi2 = 0;
  for (const auto& X : configs) {
    const double e = n * ens.prob(X);
    const double o = counts.count(X) ? counts[X] : 0;
    chi2 += (o - e) * (o - e) / e;
  }
  CHECK(chi2 < chi2_crit_1pct(static_cast<int>(configs.size()) - 1));
}

TEST_CASE("stationary occupation matches the Christoffel-Darboux density") {
  const ModelParams P(2, 3, 1);
  const int N = 20, n = 40000, M = N + 1;
  const HahnBasis basis = model_hahn_basis(P, N);
  std::vector<double> occ(M + 1, 0);
  for (int s = 0; s < n; ++s) {
    RngStream rng(5, s);
    const auto X = sample_stationary(P, N, rng);
    for (int x : X.points()) occ[x] += 1;
  }
  for (int x = 0; x <= M; ++x) {
    double rho = 0;
    for (int i = 0; i < 2; ++i) rho += basis.orthonormal(i, x) * basis.orthonormal(i, x);
    const double sigma = std::sqrt(n * rho * (1 - rho));
    CHECK(std::abs(occ[x] - n * rho) < 4 * sigma + 1);
  }
}

TEST_CASE("lag-k transitions follow the k-step kernel") {
  const ModelParams P(1, 2, 0.5);
  const int N = 6, k = 2, n = 60000;
  const Eigen::MatrixXd T = config_transition_matrix(P, updown_k_step_kernel(P, N, k));
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int s = 0; s < n; ++s) {
    RngStream rng(31, s);
    const auto path = sample_updown_trajectory(P, N, k, rng);
    REQUIRE(path.size() == static_cast<std::size_t>(k + 1));
    counts(path.front()[0], path.back()[0]) += 1;
  }
  double chi2 = 0;
  int df = 0;
  for (int a = 0; a <= N; ++a) {
    const double row = counts.row(a).sum();
    int cells = 0;
    for (int b = 0; b <= N; ++b) {
      const double e = row * T(a, b);
      if (e < 5) continue;
      chi2 += (counts(a, b) - e) * (counts(a, b) - e) / e;
      ++cells;
    }
    df += std::max(cells - 1, 0);
  }
  CHECK(chi2 < chi2_crit_1pct(df));
}

TEST_CASE("advancing a state equals sampling a trajectory") {
  const ModelParams P(2, 3, 1);
  RngStream a(8, 1), b(8, 1);
  const ParticleConfig start({3, 7}, 10, 2);
  const auto path = sample_updown_trajectory(P, 10, 50, a, start);
  ChainState st{start, 0, 0};
  advance(P, st, 50, b);
  CHECK(st.config == path.back());
  CHECK(st.time == 50);
}
