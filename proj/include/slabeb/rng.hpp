#pragma once

#include <cstdint>
#include <random>

namespace slabeb {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic per-(seed, stream) standard-normal generator. Streams are
/// decorrelated by hashing (seed, stream) into the mt19937_64 seed; normals
/// come from an explicit Box-Muller so the byte-for-byte output is fixed by
/// this code, not by library internals.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x632BE59BD9B4E019ULL * (stream + 1));
    const std::uint64_t a = splitmix64(s), b = splitmix64(s);
    gen_.seed(a ^ (b << 1));
  }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586477 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace slabeb
