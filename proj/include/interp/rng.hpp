#pragma once

#include "interp/types.hpp"

#include <cmath>
#include <cstdint>

namespace interp {

// Counter-based generator: the stream is a pure function of (key, counter),
// so any cell of a parallel experiment can regenerate its draws bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  /// Independent substream (for per-task generators).
  Rng fork(std::uint64_t stream) const {
    return Rng(mix(key_ ^ (0x9e3779b97f4a7c15ull * (stream + 1))), 0);
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard real normal (Box-Muller; consumes two draws).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Standard complex normal, E|z|^2 = 1.
  Complex cnormal() {
    return Complex(normal(), normal()) / std::sqrt(2.0);
  }

  int sign() { return (next_u64() & 1ull) ? 1 : -1; }

  CVec cnormal_vec(int n) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cnormal();
    return v;
  }

  CMat cnormal_mat(int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace interp
