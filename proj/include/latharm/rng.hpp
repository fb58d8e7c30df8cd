#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace latharm::detail {

/// Seeded generator with fixed output distributions (uniform bits through
/// mt19937_64, normals via Box-Muller), so identical seeds give identical
/// streams on every platform — std::normal_distribution makes no such promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] by rejection-free scaling (bias is negligible
  // for the small ranges used here and keeps the stream platform-stable).
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

  std::complex<double> unit_fourth_root() {
    switch (gen_() & 3u) {
      case 0: return {1.0, 0.0};
      case 1: return {-1.0, 0.0};
      case 2: return {0.0, 1.0};
      default: return {0.0, -1.0};
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace latharm::detail
