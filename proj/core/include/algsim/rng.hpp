#pragma once

#include <cstdint>
#include <string_view>

namespace algsim {

// splitmix64: the deterministic generator used by the fuzzers and the
// harness. Chosen because streams can be split cheaply (seed a child with
// next()) and the algorithm fits in a dozen lines, so results are
// reproducible from the seed alone on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n). Modulo bias is irrelevant at the scales
  // used here (n far below 2^32).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

// FNV-1a, 64-bit. Used for config digests and for deriving per-scenario
// seeds from scenario ids.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace algsim
