#ifndef DTAM_RNG_HPP
#define DTAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dtam {

// splitmix64 output scrambler (Steele/Lea/Flood mixing constants).
inline std::uint64_t splitmix64_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit generator: state advances by the golden-ratio
// increment, outputs are scrambled. Every experiment stream in this project
// is a SplitMix64 seeded through seed_mix(), so results depend only on the
// seeds and never on scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_scramble(state_);
  }

  // Uniform double in [0,1): top 53 bits scaled by 2^-53.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0,1]: as next_unit but shifted away from zero, so it
  // is safe inside log().
  double next_unit_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased-enough integer in [0,bound) via the multiply-shift reduction.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  // Standard normal via Box-Muller on (u1,u2); the sine partner of each pair
  // is cached and returned on the following call.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Folds a list of values into a base seed, one scramble round per value.
// Used to derive independent per-trial streams from (algorithm, k, trial).
inline std::uint64_t seed_mix(std::uint64_t base,
                              std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = base;
  for (std::uint64_t p : parts) {
    s = splitmix64_scramble(s + 0x9E3779B97F4A7C15ULL * (p + 1));
  }
  return s;
}

}  // namespace dtam

#endif  // DTAM_RNG_HPP
