#pragma once

// Counter-based Philox4x32-10 generator. A stream is addressed by (seed, stream
// index); draws are a pure function of (seed, stream, position), so parallel
// Monte Carlo reproduces exactly regardless of scheduling.

#include <array>
#include <cstdint>

namespace gtflow {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  PhiloxCounter buffer_{};
};

}  // namespace gtflow
