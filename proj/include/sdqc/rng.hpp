#pragma once

#include <cstdint>
#include <string_view>

namespace sdqc {

// splitmix64; used both as a small fast generator and to derive named
// sub-seeds from the experiment seed. Fixed arithmetic, no standard-library
// distributions, so streams are identical across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n). n must be > 0; modulo bias is irrelevant at the
  // ranges used here (vocab/table sizes far below 2^64).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller on fixed-arithmetic uniforms.
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over the name, mixed with the base seed. Every random stream in the
// toolkit (embedding per fold, synthetic generation, ...) draws its seed
// through this so a single experiment seed pins them all.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view name);

}  // namespace sdqc
