#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "gnet/errors.hpp"

namespace gnet {

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a root seed and a path of stream ids, so
/// disjoint paths give independent streams and insertion of new draw
/// sites cannot shift unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(root);
  for (std::uint64_t id : path) {
    s = mix64(s ^ mix64(id ^ 0xa0761d6478bd642fULL));
  }
  return s;
}

/// Identifies one experiment iteration's stream: value() is what seeds
/// the engine.
struct Seed {
  std::uint64_t root = 0;
  std::uint64_t experiment = 0;
  std::uint64_t iteration = 0;

  std::uint64_t value() const { return derive_seed(root, {experiment, iteration}); }
};

/// mt19937_64 with hand-rolled output distributions. The standard
/// distributions are not pinned by the standard, so sequences here are
/// produced only from raw engine words to stay identical across
/// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(const Seed& seed) : engine_(seed.value()) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw InvalidArgument("uniform needs lo < hi");
    return lo + (hi - lo) * uniform01();
  }

  /// Box-Muller; consumes exactly two engine words per call.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  /// Unbiased uniform integer on [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("below needs a positive bound");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t draw = next();
    while (draw >= limit) draw = next();
    return draw % bound;
  }

  /// Fisher-Yates shuffle driven by below().
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gnet
