#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace strayfield {

// SplitMix64 generator (Steele, Lea & Flood 2014). Chosen over the std::
// distributions because its output is fully specified: the same seed gives
// the same stream on every platform and compiler, which the reproducibility
// guarantees of the simulator rest on. All sampling routines below are
// written out explicitly for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Sum of M Bernoulli trials. Deliberately the naive algorithm: it is
  // exactly reproducible and fast enough for the round counts used here.
  long long binomial(long long m, double p) {
    long long hits = 0;
    for (long long i = 0; i < m; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }

  // Box-Muller; draws two uniforms per call and discards the sibling value
  // so that the stream position never depends on call history.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform point on the unit sphere.
  std::array<double, 3> unit_sphere() {
    const double z = 1.0 - 2.0 * uniform();
    const double phi = 6.283185307179586476925286766559 * uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {rho * std::cos(phi), rho * std::sin(phi), z};
  }

  // Deterministic stream-splitting rule: child k of a generator seeded with
  // s is seeded with mix(s + (k+1) * golden).  Used to give every sweep
  // repetition (and every worker) an independent stream.
  static std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    Rng r(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return r.next_u64();
  }

  Rng child(std::uint64_t index) const { return Rng(child_seed(state_, index)); }

 private:
  std::uint64_t state_;
};

}  // namespace strayfield
