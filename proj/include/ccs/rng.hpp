#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ccs {

// Deterministic random source. The engine (std::mt19937_64) is fully specified
// by the standard; the distribution algorithms below are pinned here because
// std::uniform_real_distribution and friends are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; two uniforms per draw, no cached state.
  double normal() {
    double u1 = 1.0 - uniform();  // (0,1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Uniform integer in [lo, hi], rejection sampled to avoid modulo bias.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t range = hi - lo + 1;
    std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % range;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + x % range;
  }

  int uniform_index(int n) { return static_cast<int>(uniform_int(0, std::uint64_t(n) - 1)); }

  // Fisher-Yates, descending index order.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      int j = static_cast<int>(uniform_int(0, std::uint64_t(i)));
      std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
  }

  // Independent stream derived from this seedable source; used to split
  // scenario randomness from sampling randomness.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  // SplitMix64 scrambles short user seeds into a full 64-bit state.
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace ccs
