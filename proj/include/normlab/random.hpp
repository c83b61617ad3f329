#pragma once

// Seeded randomness with portable draws. The std distributions are not
// specified bit-for-bit across standard libraries, so draws are derived from
// raw mt19937_64 output directly.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "normlab/core.hpp"

namespace normlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Substream seed for (seed, stream name, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(stream)) + splitmix64(index));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view stream, std::uint64_t index)
      : engine_(derive_seed(seed, stream, index)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw PreconditionViolation("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (engine_() >> 63) != 0; }

  // Standard normal via Box-Muller.
  double normal() {
    double u = 0.0;
    do {
      u = uniform();
    } while (u == 0.0);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  // Uniform in [-1, 1] for reals, uniform in the closed unit disc for complex.
  template <Field S>
  S scalar() {
    if constexpr (is_complex_v<S>) {
      for (;;) {
        const double a = uniform(-1.0, 1.0);
        const double b = uniform(-1.0, 1.0);
        if (a * a + b * b <= 1.0) return {a, b};
      }
    } else {
      return uniform(-1.0, 1.0);
    }
  }

  template <Field S>
  Vector<S> vector(std::size_t n) {
    Vector<S> v(n);
    for (auto& x : v) x = scalar<S>();
    return v;
  }

  // Gaussian entries (complex: independent real and imaginary parts).
  template <Field S>
  S gaussian() {
    if constexpr (is_complex_v<S>) {
      const double a = normal();
      return {a, normal()};
    } else {
      return normal();
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace normlab
