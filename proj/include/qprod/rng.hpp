#pragma once

// Deterministic randomness for protocol runs and statistical tests.
//
// All sampling goes through SeededRng so that a run is reproducible from a
// single 64-bit master seed. mt19937_64 output is fully specified by the
// standard, and the uniform helpers below avoid std::uniform_*_distribution
// (whose draw sequences are implementation-defined).

#include <cstdint>
#include <random>

namespace qprod {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n) without modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Child stream for component k, a pure function of (seed, k). Used by the
  // set-intersection and dot-product drivers so per-component results do not
  // depend on scheduling order.
  SeededRng split(std::uint64_t k) const {
    std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ull * (k + 1));
    // splitmix64 finalizer
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return SeededRng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// In-place Fisher-Yates shuffle of indices 0..n-1.
template <typename T>
void shuffle(SeededRng& rng, T& seq) {
  for (std::size_t i = seq.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(seq[i - 1], seq[j]);
  }
}

}  // namespace qprod
