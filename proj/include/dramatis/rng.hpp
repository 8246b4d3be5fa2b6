#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

// Self-contained generators so that seeded runs are bit-identical across
// platforms and standard-library versions. std::<random> distributions are
// implementation-defined and would break reproducibility guarantees.

namespace dramatis {

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Derives an independent stream seed from a base seed and a stream index.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  SplitMix64 mix(seed ^ 0x5851f42d4c957f2dULL);
  uint64_t a = mix.next();
  SplitMix64 mix2(stream + 0x14057b7ef767814fULL);
  return a ^ mix2.next();
}

// FNV-1a, for deriving per-entity substream keys from string ids.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(uint64_t seed) {
    SplitMix64 mix(seed);
    for (auto& word : state_) word = mix.next();
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection (bound > 0).
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

// Exact Binomial(n, p) sampler. Enumerates the pmf outward from the mode
// (inverse CDF over a fixed reordering of outcomes), so expected cost is
// O(sqrt(n p (1-p))) and the mode pmf never underflows.
inline int64_t sample_binomial(Xoshiro256ss& rng, int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("sample_binomial: n < 0");
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (n <= 32) {
    int64_t k = 0;
    for (int64_t i = 0; i < n; ++i) k += rng.uniform() < p ? 1 : 0;
    return k;
  }
  const double q = 1.0 - p;
  int64_t mode = static_cast<int64_t>(std::floor((static_cast<double>(n) + 1.0) * p));
  if (mode > n) mode = n;
  const double log_pm = std::lgamma(static_cast<double>(n) + 1.0) -
                        std::lgamma(static_cast<double>(mode) + 1.0) -
                        std::lgamma(static_cast<double>(n - mode) + 1.0) +
                        static_cast<double>(mode) * std::log(p) +
                        static_cast<double>(n - mode) * std::log1p(-p);
  const double pm = std::exp(log_pm);
  const double u = rng.uniform();
  double acc = pm;
  if (u <= acc) return mode;
  double p_lo = pm, p_hi = pm;
  int64_t lo = mode, hi = mode;
  while (lo > 0 || hi < n) {
    if (hi < n) {
      p_hi *= static_cast<double>(n - hi) / static_cast<double>(hi + 1) * (p / q);
      ++hi;
      acc += p_hi;
      if (u <= acc) return hi;
    }
    if (lo > 0) {
      p_lo *= static_cast<double>(lo) / static_cast<double>(n - lo + 1) * (q / p);
      --lo;
      acc += p_lo;
      if (u <= acc) return lo;
    }
  }
  return mode;  // leftover fp mass on the order of an ulp
}

// Multinomial draw by the conditional-binomial chain: exact, O(V) binomials.
// weights are non-negative counts; their sum must be positive.
inline std::vector<int64_t> sample_multinomial(Xoshiro256ss& rng, int64_t draws,
                                               std::span<const int64_t> weights) {
  int64_t rest = 0;
  for (int64_t w : weights) {
    if (w < 0) throw std::invalid_argument("sample_multinomial: negative weight");
    rest += w;
  }
  if (rest <= 0) throw std::invalid_argument("sample_multinomial: zero total weight");
  std::vector<int64_t> out(weights.size(), 0);
  int64_t remaining = draws;
  for (size_t i = 0; i < weights.size() && remaining > 0; ++i) {
    if (weights[i] == 0) continue;
    if (weights[i] >= rest) {
      out[i] = remaining;
      remaining = 0;
      break;
    }
    const double p = static_cast<double>(weights[i]) / static_cast<double>(rest);
    const int64_t k = sample_binomial(rng, remaining, p);
    out[i] = k;
    remaining -= k;
    rest -= weights[i];
  }
  return out;
}

}  // namespace dramatis
