#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spherecap {

// Thin deterministic RNG. Draws are generated from the raw 64-bit stream so
// sequences are reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_mix_(seed) {}

  double uniform() {  // in [0,1)
    return std::ldexp(static_cast<double>(gen_() >> 11), -53);
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t bits() { return gen_(); }

  // Independent substream for trial k (deterministic regardless of order).
  Rng substream(std::uint64_t k) const {
    return Rng(seed_mix_ ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_mix_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spherecap
