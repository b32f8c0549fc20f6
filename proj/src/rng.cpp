#include "relaysec/rng.hpp"

namespace relaysec {

__extension__ typedef unsigned __int128 u128;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t domain) noexcept {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (index * 0xD1B54A32D192ED03ULL);
  key = splitmix64(state);
  state = key ^ (domain + 0x632BE59BD9B4E019ULL);
  return splitmix64(state);
}

// Lemire's multiply-shift with rejection.
std::uint64_t Rng::index(std::uint64_t bound) {
  u128 product = static_cast<u128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<u128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace relaysec
