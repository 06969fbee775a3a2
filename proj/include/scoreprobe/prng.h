#pragma once

#include <cstdint>
#include <string_view>

namespace scoreprobe {

// Deterministic 64-bit generator (splitmix64). The algorithm is fixed so
// that any reimplementation reproduces the exact same streams; golden
// values are pinned in the tests.
class SeededPrng {
 public:
  explicit SeededPrng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) without modulo bias (rejection sampling).
  uint64_t next_below(uint64_t n);

  // splitmix64 output mix, also usable as a standalone bit mixer.
  static uint64_t mix(uint64_t z);

  // Independent stream derived from (seed, stream index). Used wherever
  // work units (bootstrap replicates, sweep levels) need their own
  // deterministic generator.
  static SeededPrng substream(uint64_t seed, uint64_t stream) {
    return SeededPrng(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)));
  }

 private:
  uint64_t state_;
};

// FNV-1a over raw bytes. Stable across platforms; used for content hashes
// and for deriving per-key seeds.
uint64_t fnv1a64(std::string_view bytes);

// Seed for the stream identified by (base seed, string key), e.g. one
// noise stream per response id regardless of corpus order.
inline uint64_t derive_seed(uint64_t base, std::string_view key) {
  return SeededPrng::mix(SeededPrng::mix(base) ^ fnv1a64(key));
}

}  // namespace scoreprobe
