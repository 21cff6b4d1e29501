#include <doctest.h>

#include <cmath>
#include <vector>

#include "gtflow/chains.hpp"
#include "gtflow/ensembles.hpp"
#include "gtflow/orthopoly.hpp"

using namespace gtflow;

TEST_CASE("Hahn weight examples") {
  const ModelParams uni(1, 1, 0, Mode::exact);
  for (int x = 0; x <= 2; ++x) {
    CHECK(weight_wN_exact(uni, 2, x) == 1);
    CHECK(weight_wN(uni, 2, x) == doctest::Approx(1.0));
  }
  const ModelParams P(1, 2, 0, Mode::exact);
  for (int x = 0; x <= 2; ++x) CHECK(weight_wN_exact(P, 2, x) == 3 - x);
  const ModelParams Q(2, 3.5, 0.25);
  for (int x = 0; x <= 10; ++x) CHECK(weight_wN(Q, 9, x) > 0);
}

TEST_CASE("uniform one-time distribution") {
  const DiscreteEnsemble ens(ModelParams(1, 1, 0, Mode::exact), 2);
  CHECK(ens.Z_exact() == ratio(1, 3));
  for (int x = 0; x <= 2; ++x) CHECK(ens.prob_exact(ParticleConfig({x}, 2, 1)) == ratio(1, 3));
}

TEST_CASE("closed-form normalization matches enumeration") {
  for (int p = 1; p <= 3; ++p)
    for (int zp = p; zp <= p + 2; ++zp)
      for (int wp = 0; wp <= 2; ++wp)
        for (int N = 0; N <= 5; ++N) {
          const DiscreteEnsemble ens(ModelParams(p, zp, wp, Mode::exact), N);
          CAPTURE(p);
          CAPTURE(zp);
          CAPTURE(wp);
          CAPTURE(N);
          CHECK(ens.Z_exact() == ens.Z_bruteforce_exact());
          Rational total(0);
          for (const auto& X : configs_in_box(N, p)) total += ens.prob_exact(X);
          CHECK(total == 1);
        }
}

TEST_CASE("float probabilities track the exact ones") {
  const ModelParams P(2, 4, 1, Mode::exact);
  const DiscreteEnsemble ens(P, 6);
  for (const auto& X : configs_in_box(6, 2))
    CHECK(ens.prob(X) == doctest::Approx(ens.prob_exact(X).get_d()).epsilon(1e-12));
  // Non-integral parameters still normalize.
  const DiscreteEnsemble f(ModelParams(2, 2.7, -0.4), 12);
  double total = 0;
  for (const auto& X : configs_in_box(12, 2)) total += f.prob(X);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("particle pushforward of the signature measure") {
  for (int p = 1; p <= 3; ++p)
    for (int N = 0; N <= 4; ++N) {
      const ModelParams P(p, p + 1, 1, Mode::exact);
      const DiscreteEnsemble ens(P, N);
      for (const auto& lambda : signatures_in_box(N, p))
        CHECK(ens.prob_exact(to_particles(lambda, p)) == prob_MN(P, lambda));
    }
}

TEST_CASE("box mismatch is rejected") {
  const DiscreteEnsemble ens(ModelParams(2, 3, 1, Mode::exact), 3);
  CHECK_THROWS_AS(ens.prob_exact(ParticleConfig({0, 1}, 4, 2)), DomainError);
}

TEST_CASE("four-parameter measure: specialization, shift invariance, normalization") {
  for (int N = 0; N <= 4; ++N) {
    const int p = 2, zp = 3, wp = 1;
    const GeneralZWMeasure m(p, 0, zp, wp, N);
    const ModelParams P(p, zp, wp, Mode::exact);
    Rational total(0);
    for (const auto& lambda : m.support()) {
      total += m.mass(lambda);
      CHECK(m.mass(lambda) == prob_MN(P, lambda));
    }
    CHECK(total == 1);
    for (int n = 1; n <= 2; ++n) {
      const GeneralZWMeasure s = m.shifted(n);
      for (const auto& lambda : m.support()) {
        std::vector<int> up(lambda.parts().begin(), lambda.parts().end());
        for (int& v : up) v += n;
        CHECK(s.mass(Signature(up)) == m.mass(lambda));
      }
    }
  }
  const GeneralZWMeasure g(1, 1, 2, 3, 3);
  Rational total(0);
  for (const auto& lambda : g.support()) total += g.mass(lambda);
  CHECK(total == 1);
}

TEST_CASE("limit density normalization constant") {
  CHECK(LimitEnsemble(ModelParams(1, 1, 0)).B() == doctest::Approx(1.0).epsilon(1e-14));
  // Selberg integral values from tests/oracles/frozen_values.py.
  CHECK(LimitEnsemble(ModelParams(2, 3, 1)).B() == doctest::Approx(720.0).epsilon(1e-12));
  CHECK(LimitEnsemble(ModelParams(3, 4.5, 0.5)).B() == doctest::Approx(1082181.919034450802).epsilon(1e-12));
}

TEST_CASE("limit density properties") {
  const LimitEnsemble uni(ModelParams(1, 1, 0));
  for (double x : {0.1, 0.5, 0.99}) {
    const double X[] = {x};
    CHECK(uni.density(X) == doctest::Approx(1.0));
  }
  const LimitEnsemble sym(ModelParams(2, 3.5, 1.5));  // w' = z' - p
  const double X[] = {0.15, 0.62}, R[] = {0.38, 0.85};
  CHECK(sym.density(X) == doctest::Approx(sym.density(R)).epsilon(1e-13));
  const double unordered[] = {0.6, 0.3}, tied[] = {0.4, 0.4};
  CHECK(sym.density(unordered) == 0);
  CHECK(sym.density(tied) == 0);
  CHECK(LimitEnsemble(ModelParams(2, 3, 1)).total_mass(40) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(LimitEnsemble(ModelParams(3, 4.5, 0.5)).total_mass(24) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("discrete measure approaches the density") {
  const ModelParams uni(1, 1, 0);
  const LimitEnsemble lim(uni);
  for (int N : {50, 100, 200, 400}) {
    const double X[] = {0.37};
    const auto [d, r] = discrete_to_continuum_check(DiscreteEnsemble(uni, N), lim, X);
    CHECK(d == doctest::Approx(static_cast<double>(N) / (N + 1)).epsilon(1e-12));
    CHECK(r == doctest::Approx(1.0));
  }
  const ModelParams P(2, 3, 1);
  const LimitEnsemble lim2(P);
  const double X[] = {0.3, 0.6};
  double prev = 1e9;
  for (int N : {50, 100, 200, 400}) {
    const auto [d, r] = discrete_to_continuum_check(DiscreteEnsemble(P, N), lim2, X);
    const double err = std::abs(d / r - 1);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.02);
  const double collide[] = {0.3, 0.3001};
  CHECK_THROWS_AS(discrete_to_continuum_check(DiscreteEnsemble(P, 50), lim2, collide), DomainError);
}

TEST_CASE("rounding ties go up") {
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(2.49) == 2);
  CHECK(round_half_up(0.0) == 0);
}
