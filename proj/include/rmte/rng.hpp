#pragma once

#include <cstdint>
#include <complex>
#include <initializer_list>
#include <random>

namespace rmte {

// splitmix64; used to turn (master seed, task indices) tuples into
// well-separated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Hash a sequence of 64-bit parts into one stream seed. Every parallel task
// (realization index, state index, ...) gets its own stream so that results
// do not depend on scheduling.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0x243f6a8885a308d3ull;  // arbitrary non-zero start
  for (std::uint64_t p : parts) {
    s ^= splitmix64(p);
    (void)splitmix64(s);
    s = s * 0x100000001b3ull + p;
  }
  std::uint64_t st = s;
  return splitmix64(st);
}

// Seeded random stream. Distribution code is hand-rolled (not the std::
// distributions) so that a given seed produces the same numbers on every
// standard library implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in (-1/2, 1/2]
  double uniform_half_open() { return 0.5 - uniform(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r % n;
  }

  // standard normal, Box-Muller
  double gauss() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    cache_ = r * std::sin(two_pi * u2);
    have_cache_ = true;
    return r * std::cos(two_pi * u2);
  }

  // complex standard normal (independent N(0,1) real and imaginary parts)
  std::complex<double> cgauss() { return {gauss(), gauss()}; }

 private:
  std::mt19937_64 gen_;
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace rmte
