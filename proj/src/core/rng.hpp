#pragma once

#include <cstdint>

namespace mrl {

// SplitMix64. Used everywhere randomness is needed so that trials are
// reproducible bit-for-bit across platforms and standard libraries
// (std::<distribution> output is implementation-defined, so we avoid it).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1) with 53 bits of precision
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(n));
  }

  // standard normal via Box-Muller (one value per call, cached pair dropped
  // to keep the stream position easy to reason about)
  double next_normal();

  // derive an independent stream, e.g. per trial or per epoch
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace mrl
