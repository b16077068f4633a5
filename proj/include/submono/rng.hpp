#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace submono {

// Thin wrapper so every randomized component takes an explicit seed and the
// draw sequence is reproducible across platforms (mt19937_64 is pinned by the
// standard; we avoid std::uniform_real_distribution, whose output is not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double unit() {
    return (eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  std::uint64_t integer(std::uint64_t n) {  // in [0, n)
    return eng_() % n;
  }
  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

} // namespace submono
