#pragma once

#include <cstdint>
#include <random>

namespace ares {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a sequence of words into one seed. Each step is a bijection of the
/// running state, so streams differing in any single component never share
/// a seed.
template <class... Words>
constexpr std::uint64_t derive_seed(std::uint64_t master, Words... words) noexcept {
  std::uint64_t h = mix64(master);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(words) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

/// Seeded random stream. Uniform variates are produced from raw 64-bit
/// draws with a fixed conversion, so sequences are identical across
/// standard-library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Random stream for clone `clone` at `level`, schedule attempt `attempt`.
inline Rng clone_seed_stream(std::uint64_t master, std::uint64_t clone, std::uint64_t level,
                             std::uint64_t attempt) {
  return Rng(derive_seed(master, clone, level, attempt));
}

/// Seed of experiment `index` under `master`; reproducible in isolation.
constexpr std::uint64_t experiment_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return derive_seed(master, index);
}

}  // namespace ares
