#ifndef ECRSEG_RNG_HPP
#define ECRSEG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ecrseg {

/// Seeded generator with hand-rolled deviates. mt19937_64 output is
/// standardized bit-for-bit; std distributions are not, so uniform and
/// normal draws are derived here to keep results stable everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// uniform in [0, 1)
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// uniform in [0, n)
  std::int64_t below(std::int64_t n) {
    return std::int64_t(uniform() * double(n)) % n;
  }

  /// standard normal via Box-Muller; one cached deviate
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ecrseg

#endif
