#pragma once

#include <cstdint>

namespace pxg {

// splitmix64 finalizer; a 64-bit bijection with strong avalanche.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based random stream: every draw is a pure function of
// (key, counter), and substreams are derived by folding tags into the key.
// Draws therefore do not depend on evaluation order or thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  RngStream fork(std::uint64_t tag) const { return RngStream(mix64(key_ ^ (0xA24BAED4963EE407ull + tag))); }

  std::uint64_t word(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

  std::uint32_t bit(std::uint64_t counter) const { return static_cast<std::uint32_t>(word(counter) & 1u); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit(std::uint64_t counter) const { return static_cast<double>(word(counter) >> 11) * 0x1.0p-53; }

  // Bernoulli(p); p >= 1 always succeeds, p quantized to multiples of 2^-64 otherwise.
  bool coin(double p, std::uint64_t counter) const {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return word(counter) < static_cast<std::uint64_t>(p * 0x1.0p64);
  }

 private:
  std::uint64_t key_;
};

// Stream roles; per the independence contract, the compact set and the graph
// sequence of one trial come from separately tagged streams.
inline constexpr std::uint64_t kRoleSet = 0x5e7;
inline constexpr std::uint64_t kRoleGraph = 0x62a9;

}  // namespace pxg
