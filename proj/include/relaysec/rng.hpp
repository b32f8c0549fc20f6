#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace relaysec {

/// One step of the splitmix64 mixer; used for stream derivation only.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Stream key for (master seed, index, domain). Distinct domains keep trial
/// streams and network-realization streams apart for the same index.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t domain) noexcept;

/// Thin wrapper around mt19937_64 with the few draws the simulator needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unit-mean exponential.
  double exponential() { return -std::log(uniform()); }

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace relaysec
