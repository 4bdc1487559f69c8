#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pfrlab {

// Splittable counter-style generator used for seed derivation and cheap
// per-shot uniform draws. Not cryptographic.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Deterministic seed for a sub-task identified by up to three tags.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// FNV-1a over raw bytes; used for config/dataset digests.
std::uint64_t fnv1a64(std::string_view bytes);

// Round-trip-safe decimal form of a double ("%.17g").
std::string format_double(double v);

}  // namespace pfrlab
