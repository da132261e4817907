#pragma once

#include <cstdint>

namespace fplab {

// Deterministic seeded stream (splitmix64). The standard library's
// distributions are implementation-defined, and reruns must be byte-identical
// across toolchains, so the generator and the bounded draw are pinned here.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, n), rejection-corrected (Lemire).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    unsigned __int128 m;
    std::uint64_t l;
    const std::uint64_t t = (0 - n) % n;
    do {
      m = static_cast<unsigned __int128>(next()) * n;
      l = static_cast<std::uint64_t>(m);
    } while (l < t);
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Stateless scramble used to derive independent substreams and per-cell seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  RngStream s(a ^ (0x6A09E667F3BCC909ull + b));
  s.next();
  return s.next();
}

// Stable string hash (FNV-1a) for seed derivation from identifiers.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace fplab
