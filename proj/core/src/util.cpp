#include "pfrlab/util.hpp"

#include <cstdio>

namespace pfrlab {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
  SplitMix64 mix(master);
  std::uint64_t s = mix.next();
  s ^= a * 0x9e3779b97f4a7c15ULL;
  s = SplitMix64(s).next();
  s ^= b * 0xc2b2ae3d27d4eb4fULL;
  s = SplitMix64(s).next();
  s ^= c * 0x165667b19e3779f9ULL;
  return SplitMix64(s).next();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace pfrlab
