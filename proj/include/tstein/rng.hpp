// Deterministic random streams: xoshiro256** seeded through splitmix64
// from (seed, salt, stream).  Every stream is a pure function of its
// identifiers, which is what makes chunked sampling reproducible across
// worker counts.
#pragma once

#include <cmath>
#include <cstdint>

namespace tstein {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
inline std::uint64_t rotl64(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t salt, std::uint64_t stream) {
    std::uint64_t x = seed;
    x ^= 0x9E3779B97F4A7C15ULL * (salt + 1);
    (void)detail::splitmix64(x);
    x ^= 0xBF58476D1CE4E5B9ULL * (stream + 1);
    for (auto& w : s_) w = detail::splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl64(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

  // Standard normal via the Marsaglia polar method (second value cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, r2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double m = std::sqrt(-2.0 * std::log(r2) / r2);
    cached_ = v * m;
    have_cached_ = true;
    return u * m;
  }

 private:
  std::uint64_t s_[4];
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace tstein
