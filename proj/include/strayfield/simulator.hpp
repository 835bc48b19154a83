#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strayfield/channel.hpp"
#include "strayfield/graph.hpp"
#include "strayfield/rng.hpp"

namespace strayfield {

// 64-bit seed of the documented SplitMix64 stream; identical seeds give
// bit-identical simulation output.
using RandomSeed = std::uint64_t;

// Outcome tallies of M correlator measurement rounds per vertex.
struct SyndromeStats {
  struct PerVertex {
    long long rounds = 0;
    long long count0 = 0;
    long long count1 = 0;
    double delta_r = 0.0;  // (count0 - count1) / rounds
  };
  std::vector<PerVertex> per_vertex;  // index a-1 for vertex a

  std::vector<double> delta_r() const;
};

// Samples each vertex independently: count0 ~ Binomial(M, (1 + dp_a)/2).
// The reconstruction pipeline only consumes the marginal rates, so the
// correlations of the true joint syndrome distribution are not modelled
// here; sample_joint_syndromes below provides the exact-distribution
// variant for validation at small n.
SyndromeStats sample_syndromes(const ProbabilityDifferences& dp, long long rounds, RandomSeed seed);

// Brute-force expectation value <G~| K_a |G~> on the dense state vector,
// with K_a = X_a prod Z_b, or its logical-basis analogue when a basis is
// given. n <= 12, no isolated vertices.
double statevector_delta_p(const Graph& g, const FieldConfig& cfg, int a,
                           const std::optional<LogicalBasis>& basis = std::nullopt);

// Samples full syndrome strings: each round prepares U_field |G>, measures
// the commuting correlators sequentially with projective updates, then
// discards the state (the code re-prepares |G> every round).
SyndromeStats sample_joint_syndromes(const Graph& g, const FieldConfig& cfg, long long rounds,
                                     RandomSeed seed);

// Tilts every axis away from the promise direction: squared transverse
// magnitude uniform in [0, 2*epsilon] (mean epsilon, clamped to <= 1),
// uniform transverse direction, lambda preserved.
FieldConfig perturb_axes(const FieldConfig& cfg, Axis axis, double epsilon, RandomSeed seed);

// CSV: vertex,M,count0,count1,delta_r
void write_syndrome_csv(std::ostream& out, const SyndromeStats& stats);
SyndromeStats read_syndrome_csv(std::istream& in);

}  // namespace strayfield
