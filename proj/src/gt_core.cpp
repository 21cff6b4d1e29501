#include "gtflow/gt_core.hpp"

#include <algorithm>
#include <sstream>

namespace gtflow {

namespace {

std::string join(std::span<const int> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

void predecessors_rec(const Signature& mu, std::vector<int>& cur, std::vector<Signature>& out) {
  const std::size_t i = cur.size();
  if (static_cast<int>(i) + 1 == mu.level()) {
    out.emplace_back(cur);
    return;
  }
  for (int v = mu[i + 1]; v <= mu[i]; ++v) {
    cur.push_back(v);
    predecessors_rec(mu, cur, out);
    cur.pop_back();
  }
}

void count_rec(const Signature& lambda, std::uint64_t guard, Integer& count) {
  if (lambda.level() == 0) {
    ++count;
    if (count > guard) throw DomainError("count_paths_bruteforce: path count exceeds guard");
    return;
  }
  for (const auto& pred : interlacing_predecessors(lambda)) count_rec(pred, guard, count);
}

void box_rec(int N, int upper, std::vector<int>& cur, std::vector<Signature>& out) {
  if (static_cast<int>(cur.size()) == N) {
    out.emplace_back(cur);
    return;
  }
  for (int v = 0; v <= upper; ++v) {
    cur.push_back(v);
    box_rec(N, v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Signature::Signature(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 1; i < parts_.size(); ++i)
    if (parts_[i] > parts_[i - 1]) throw DomainError("signature parts must be non-increasing: " + join(parts_));
}

std::strong_ordering Signature::operator<=>(const Signature& other) const {
  if (auto c = parts_.size() <=> other.parts_.size(); c != 0) return c;
  return parts_ <=> other.parts_;
}

std::string Signature::str() const { return parts_.empty() ? "()" : join(parts_); }

ParticleConfig::ParticleConfig(std::vector<int> points, int N, int p) : points_(std::move(points)), N_(N), p_(p) {
  if (N < 0 || p < 1) throw DomainError("particle box requires N >= 0 and p >= 1");
  if (static_cast<int>(points_.size()) != p)
    throw DomainError("particle configuration must have exactly p points: " + join(points_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] < 0 || points_[i] > N + p - 1)
      throw DomainError("particle outside {0..N+p-1}: " + join(points_));
    if (i > 0 && points_[i] <= points_[i - 1])
      throw DomainError("particle positions must be strictly increasing: " + join(points_));
  }
}

std::strong_ordering ParticleConfig::operator<=>(const ParticleConfig& other) const {
  if (auto c = N_ <=> other.N_; c != 0) return c;
  if (auto c = p_ <=> other.p_; c != 0) return c;
  return points_ <=> other.points_;
}

std::string ParticleConfig::str() const { return join(points_); }

bool interlaces(const Signature& lower, const Signature& upper) {
  if (upper.level() != lower.level() + 1)
    throw DomainError("interlaces: levels " + std::to_string(lower.level()) + " and " +
                      std::to_string(upper.level()) + " are not adjacent");
  for (int i = 0; i < lower.level(); ++i)
    if (!(upper[i] >= lower[i] && lower[i] >= upper[i + 1])) return false;
  return true;
}

std::vector<Signature> interlacing_predecessors(const Signature& mu) {
  if (mu.level() == 0) throw DomainError("the empty signature has no predecessors");
  std::vector<Signature> out;
  std::vector<int> cur;
  predecessors_rec(mu, cur, out);
  return out;
}

Integer dim(const Signature& lambda) {
  Rational r(1);
  const int n = lambda.level();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      r *= ratio(lambda[i] - lambda[j] + j - i, j - i);
    }
  return r.get_num();
}

Integer count_paths_bruteforce(const Signature& lambda, std::uint64_t guard) {
  Integer count = 0;
  count_rec(lambda, guard, count);
  return count;
}

std::vector<Signature> signatures_in_box(int N, int p) {
  std::vector<Signature> out;
  std::vector<int> cur;
  box_rec(N, p, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ParticleConfig> configs_in_box(int N, int p) {
  std::vector<ParticleConfig> out;
  const int n = N + p;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(idx, N, p);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

ParticleConfig to_particles(const Signature& lambda, int p) {
  const int N = lambda.level();
  if (N > 0 && (lambda[0] > p || lambda[N - 1] < 0))
    throw DomainError("to_particles requires p >= lambda_1 >= ... >= lambda_N >= 0, got " + lambda.str());
  std::vector<bool> occupied(N + p, false);
  for (int i = 0; i < N; ++i) occupied[lambda[i] - (i + 1) + N] = true;
  std::vector<int> pts;
  for (int x = 0; x < N + p; ++x)
    if (!occupied[x]) pts.push_back(x);
  return ParticleConfig(std::move(pts), N, p);
}

Signature from_particles(const ParticleConfig& X) {
  const int N = X.N();
  std::vector<bool> taken(N + X.p(), false);
  for (int x : X.points()) taken[x] = true;
  std::vector<int> parts;
  parts.reserve(N);
  int i = 1;
  for (int h = N + X.p() - 1; h >= 0; --h) {
    if (taken[h]) continue;
    parts.push_back(h + i - N);
    ++i;
  }
  return Signature(std::move(parts));
}

bool particles_interlace(const ParticleConfig& lower, const ParticleConfig& upper) {
  if (upper.N() != lower.N() + 1 || upper.p() != lower.p())
    throw DomainError("particles_interlace: boxes are not (N,p) and (N+1,p)");
  for (int i = 0; i < lower.p(); ++i) {
    const int d = upper[i] - lower[i];
    if (d != 0 && d != 1) return false;
  }
  return true;
}

Integer vandermonde(const ParticleConfig& X) {
  Integer v = 1;
  auto pts = X.points();
  for (std::size_t j = 1; j < pts.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v *= (pts[j] - pts[i]);
  return v;
}

Integer dim_via_particles(const ParticleConfig& X) {
  const int N = X.N();
  const int p = X.p();
  Rational r(vandermonde(X));
  for (int x : X.points()) r /= Rational(factorial(x) * factorial(N + p - 1 - x));
  for (int i = 1; i <= p; ++i) r *= Rational(factorial(N + i - 1));
  if (r.get_den() != 1) throw Error("dim_via_particles: non-integral result");
  return r.get_num();
}

ComplementIdentity vandermonde_complement(const std::vector<int>& subset, int k) {
  std::vector<bool> in(k + 1, false);
  for (int x : subset) {
    if (x < 0 || x > k) throw DomainError("vandermonde_complement: element outside {0..k}");
    in[x] = true;
  }
  std::vector<Integer> xs, comp;
  for (int x = 0; x <= k; ++x) (in[x] ? xs : comp).push_back(x);
  ComplementIdentity out;
  out.lhs = Rational(vandermonde<Integer>(xs));
  Rational rhs(vandermonde<Integer>(comp));
  for (const auto& x : comp) {
    const unsigned xi = static_cast<unsigned>(x.get_ui());
    rhs /= Rational(factorial(xi) * factorial(static_cast<unsigned>(k) - xi));
  }
  for (int i = 1; i <= k; ++i) rhs *= Rational(factorial(i));
  out.rhs = rhs;
  return out;
}

}  // namespace gtflow
