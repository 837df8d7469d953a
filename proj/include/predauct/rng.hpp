#pragma once

#include <cstdint>

namespace predauct {

// Deterministic 64-bit RNG (xorshift-style splitmix64 stream). Uniform draws
// do not depend on the standard library's distribution implementations, so
// seeded runs reproduce bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Open-interval uniform, handy for quantile transforms that blow up at 0/1.
  double uniform_open() {
    double u = uniform01();
    return u < 1e-16 ? 1e-16 : u;
  }

  // Derives an independent stream, e.g. one per Monte-Carlo task.
  static std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    Rng r(root ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace predauct
