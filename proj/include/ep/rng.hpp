#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ep {

// splitmix64 finalizer. Seed derivation and counter-based draws both go
// through this so that every random stream is a pure function of
// (seed, tags...) and independent of evaluation order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a) { return mix64(seed ^ mix64(a)); }

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive(derive(seed, a, b), c);
}

// Uniform in [0, 1). 53-bit mantissa.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double unit_uniform(std::uint64_t seed, std::uint64_t a) {
  return unit_from_bits(mix64(derive(seed, a)));
}

inline double unit_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return unit_from_bits(mix64(derive(seed, a, b)));
}

inline double unit_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return unit_from_bits(mix64(derive(seed, a, b, c)));
}

// Small sequential generator (xorshift-multiply over a splitmix64 state
// walk). Self-contained so streams are stable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // [0, 1)
  double next_unit() { return unit_from_bits(next_u64()); }

  // Unbiased integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Inclusive range.
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace ep
