// Deterministic pseudo-random stream and the variate generators built on it.
// All distributions are derived from the raw 64-bit stream with fixed
// algorithms, so a seed reproduces the identical sample sequence bit for bit.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace wf {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  // Independent substream for replicate i (parallel Monte Carlo).
  RandomStream substream(std::uint64_t i) const {
    std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL * (i + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return RandomStream(z ^ (z >> 31));
  }

  // Uniform on [0,1).
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1).
  double u01_open() {
    double u;
    do { u = u01(); } while (u == 0.0);
    return u;
  }

  double exponential() { return -std::log(u01_open()); }

  // Marsaglia polar method.
  double normal() {
    if (have_spare_) { have_spare_ = false; return spare_; }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Marsaglia-Tsang for shape >= 1; boost by U^{1/a} below 1.
  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      double g = gamma(shape + 1.0);
      return g * std::pow(u01_open(), 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = u01_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wf
