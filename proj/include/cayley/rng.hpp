#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace cayley {

namespace detail {
inline uint64_t splitmix64(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Deterministic seeded generator. Every sample in the library is a pure
// function of (seed, call sequence). split(k) derives an independent child
// stream; parallel loops give each trial its own child keyed by trial index,
// so results do not depend on thread count or scheduling.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : seed_(seed) {
    uint64_t s = seed;
    uint64_t a = detail::splitmix64(s), b = detail::splitmix64(s);
    uint64_t c = detail::splitmix64(s), d = detail::splitmix64(s);
    std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                      static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32),
                      static_cast<uint32_t>(c), static_cast<uint32_t>(c >> 32),
                      static_cast<uint32_t>(d), static_cast<uint32_t>(d >> 32)};
    eng_.seed(seq);
  }

  SplitRng split(uint64_t stream) const {
    uint64_t s = seed_ ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL);
    return SplitRng(detail::splitmix64(s));
  }

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return eng_(); }

  // uniform on [0,1) with 53-bit resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // integer in [0, n)
  uint64_t below(uint64_t n) {
    // rejection to stay exactly uniform
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= lim);
    return x % n;
  }

  // Standard complex Gaussian via Box-Muller: E z = 0, E|z|^2 = 1
  // (|z|^2 exponential, phase uniform).
  std::pair<double, double> complex_gaussian() {
    double u1 = uniform01();
    double u2 = uniform01();
    double rad = std::sqrt(-std::log1p(-u1));
    double phi = 2.0 * 3.14159265358979323846 * u2;
    return {rad * std::cos(phi), rad * std::sin(phi)};
  }

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace cayley
