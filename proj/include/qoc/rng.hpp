#pragma once

#include <cstdint>

namespace qoc {

// SplitMix64-based generator with hand-rolled distributions so that streams
// are identical across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal (Box-Muller; one value per call, no caching)
  double normal();

  // derive an independent stream for sub-task k
  Rng fork(std::uint64_t k) const {
    Rng r(state_ ^ (0x632be59bd9b4e019ULL * (k + 1)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
};

inline double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  double u2 = uniform();
  // sqrt(-2 ln u1) cos(2 pi u2)
  double r = __builtin_sqrt(-2.0 * __builtin_log(u1));
  return r * __builtin_cos(6.283185307179586476925287 * u2);
}

}  // namespace qoc
