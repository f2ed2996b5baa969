#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace scrambler {

// SplitMix64 finalizer. Used as a stateless counter-based generator so that
// per-(layer, qubit) decisions can be recomputed in any order without storing
// stream state.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hash-chains a list of identifiers into one stream seed.
inline uint64_t derive_seed(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (uint64_t p : parts) {
    h = mix64(h ^ mix64(p));
  }
  return h;
}

// Bernoulli(p) decision keyed by (seed, a, b); pure function of its inputs.
inline bool counter_bernoulli(uint64_t seed, uint64_t a, uint64_t b, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const uint64_t threshold = static_cast<uint64_t>(p * 18446744073709551616.0);
  return derive_seed({seed, a, b}) < threshold;
}

// Stateful stream for trajectory-local randomness (measurement outcomes,
// random gate draws). One instance per trajectory, never shared.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix64(seed)) {}

  bool coin() { return (engine_() >> 63) != 0; }

  // Uniform integer in [0, bound).
  uint64_t below(uint64_t bound) {
    std::uniform_int_distribution<uint64_t> dist(0, bound - 1);
    return dist(engine_);
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scrambler
