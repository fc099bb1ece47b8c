#pragma once

#include <cmath>
#include <cstdint>

#include "lue/common.hpp"

namespace lue::rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based splitmix stream. Disjoint reproducible substreams are keyed
/// by (master, index), so parallel draws are independent of thread count.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
  }
  static Stream substream(std::uint64_t master, std::uint64_t index) {
    return Stream(derive(master, index));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  /// Uniform on the open interval (0, 1).
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

  /// Gamma(shape, 1) by the Marsaglia-Tsang squeeze (d = a - 1/3, c = 1/(3 sqrt d)),
  /// with the standard U^{1/a} boost for shape < 1.
  double next_gamma(double shape) {
    require(shape > 0.0, "next_gamma: requires shape > 0");
    if (shape < 1.0) {
      const double u = next_unit();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x = next_normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = next_unit();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace lue::rng
