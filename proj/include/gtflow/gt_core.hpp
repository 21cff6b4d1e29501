#pragma once

// Combinatorics of the Gelfand-Tsetlin graph: signatures, interlacing, path
// counting, the Weyl dimension and the particle encoding lambda <-> X(lambda).

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gtflow/numeric.hpp"

namespace gtflow {

/// Non-increasing integer tuple lambda_1 >= ... >= lambda_N; a vertex of level N.
/// The empty signature (level 0) is the root of the graph.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<int> parts);

  int level() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  std::span<const int> parts() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }

  // Lexicographic order on parts, shorter signatures first.
  std::strong_ordering operator<=>(const Signature& other) const;
  bool operator==(const Signature& other) const = default;

  std::string str() const;

 private:
  std::vector<int> parts_;
};

/// p strictly increasing points in X_{N,p} = {0, ..., N+p-1}.
class ParticleConfig {
 public:
  ParticleConfig(std::vector<int> points, int N, int p);

  int N() const { return N_; }
  int p() const { return p_; }
  int max_site() const { return N_ + p_ - 1; }
  std::span<const int> points() const { return points_; }
  int operator[](std::size_t i) const { return points_[i]; }

  std::strong_ordering operator<=>(const ParticleConfig& other) const;
  bool operator==(const ParticleConfig& other) const = default;

  std::string str() const;

 private:
  std::vector<int> points_;
  int N_;
  int p_;
};

/// lower < upper in the graph: upper_1 >= lower_1 >= upper_2 >= ... >= lower_N >= upper_{N+1}.
bool interlaces(const Signature& lower, const Signature& upper);

/// All lambda at level mu.level()-1 with lambda < mu, in lexicographic order.
std::vector<Signature> interlacing_predecessors(const Signature& mu);

/// Weyl dimension prod_{i<j} (l_i - l_j + j - i) / (j - i).
Integer dim(const Signature& lambda);

/// Number of paths from the empty signature, by exhaustive recursion.
/// Throws DomainError once the count exceeds `guard`.
Integer count_paths_bruteforce(const Signature& lambda, std::uint64_t guard = 10'000'000);

/// Signatures with p >= lambda_1 >= ... >= lambda_N >= 0, lexicographically increasing.
std::vector<Signature> signatures_in_box(int N, int p);

/// All configurations of p points in {0, ..., N+p-1}, lexicographically increasing.
std::vector<ParticleConfig> configs_in_box(int N, int p);

ParticleConfig to_particles(const Signature& lambda, int p);
Signature from_particles(const ParticleConfig& X);

/// X < X' as images of interlacing signatures: x'_i in {x_i, x_i + 1} for every i.
bool particles_interlace(const ParticleConfig& lower, const ParticleConfig& upper);

/// prod_{x<y} (y - x) over the increasing sequence; 1 for fewer than two points.
template <class T>
T vandermonde(std::span<const T> xs) {
  T v = T(1);
  for (std::size_t j = 1; j < xs.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) v *= (xs[j] - xs[i]);
  return v;
}

Integer vandermonde(const ParticleConfig& X);

/// Dim(lambda) from the particle picture:
/// V(X) prod_i [x_i! (N+p-1-x_i)!]^{-1} prod_{i=1}^p (N+i-1)!.
Integer dim_via_particles(const ParticleConfig& X);

/// Both sides of the complement identity on A = {0..k}:
/// V(X) and V(A\X) prod_{x in A\X} 1/(x!(k-x)!) prod_{i=1}^k i!.
struct ComplementIdentity {
  Rational lhs;
  Rational rhs;
};
ComplementIdentity vandermonde_complement(const std::vector<int>& subset, int k);

}  // namespace gtflow
