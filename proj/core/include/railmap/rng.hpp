#pragma once

#include <cmath>
#include <cstdint>

namespace railmap {

// All randomness in the project goes through these fully-specified
// generators so that identical seeds give identical artifacts on any
// platform/stdlib (std::normal_distribution is implementation-defined).

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed (per frame, per tile, per region...).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(base) ^ (stream + 0x9e3779b97f4a7c15ULL));
}

inline double u01_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stateless per-cell draw for speckle rasterization: comparing the same
// hash against a larger fill keeps footprints monotone in fill.
inline double cell_hash01(std::uint64_t seed, std::int64_t cx, std::int64_t cy) noexcept {
  std::uint64_t h = seed;
  h = splitmix64(h ^ static_cast<std::uint64_t>(cx) * 0x9e3779b97f4a7c15ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(cy) * 0xc2b2ae3d27d4eb4fULL);
  return u01_from_bits(h);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& w : state_) {
      x = splitmix64(x);
      w = x;
    }
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform01() noexcept { return u01_from_bits(next()); }

  // Box-Muller, spare value cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t v, int k) noexcept {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace railmap
