#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lml {

/// Derives a sub-stream seed from a base seed and a string tag (FNV-1a).
std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag);

/// Derives a sub-stream seed from a base seed and an integer salt.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard; the draws below avoid std::*_distribution, whose output is
/// implementation-defined, so every stream is reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Unbiased uniform integer in [0, bound); bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  /// Standard normal via Box-Muller.
  double normal();

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lml
