#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "strayfield/channel.hpp"
#include "strayfield/graph.hpp"

namespace strayfield {

// Measured rate differences for every (logical basis, vertex) pair.
struct MultiBasisDataset {
  std::vector<LogicalBasis> bases;
  std::vector<std::vector<double>> measured;  // measured[basis][vertex-1]
  long long rounds = 0;                       // per (basis, vertex); 0 = exact

  int basis_count() const { return static_cast<int>(bases.size()); }
};

// Haar-uniform logical Pauli basis (right-handed by construction).
LogicalBasis random_basis(std::uint64_t seed);
LogicalBasis random_basis(class Rng& rng);

// Sum of squared residuals between the model predictions of cfg and the
// measured rate differences, over all bases and vertices.
double cost(const FieldConfig& cfg, const Graph& g, const MultiBasisDataset& data);

// Forward-simulated datasets: exact probabilities or binomial-sampled rates.
MultiBasisDataset exact_dataset(const Graph& g, const FieldConfig& cfg,
                                const std::vector<LogicalBasis>& bases);
MultiBasisDataset sampled_dataset(const Graph& g, const FieldConfig& cfg,
                                  const std::vector<LogicalBasis>& bases, long long rounds,
                                  std::uint64_t seed);

struct EstimateOptions {
  int restarts = 20;
  int polish_stages = 2;       // extra simplex runs restarted at the winner
  int max_iterations = 20000;  // per simplex run
  double f_tolerance = 1e-16;
  bool warn_underdetermined = true;
};

struct FieldEstimate {
  FieldConfig config;       // canonical gauge (n_y >= 0, lambda in [0, pi])
  double cost_value = 0.0;
  long long iterations = 0;  // total function-evaluation budget spent
  bool converged = false;
  bool underdetermined_warning = false;  // fewer equations than unknowns
  // Number of gauge-distinct parameter points among the restart winners
  // whose cost ties the optimum; > 1 flags a non-unique fit.
  int distinct_minima = 0;
};

// Least-squares fit of all 3N field parameters (lambda, polar, azimuth per
// vertex) by multi-start Nelder-Mead; deterministic given the seed.
FieldEstimate estimate_fields(const Graph& g, const MultiBasisDataset& data,
                              const EstimateOptions& options, std::uint64_t seed);

// Arrow representation beta_a * n_a of a field, gauge-fixed to the
// hemisphere convention (positive z component, then y, then x).
Vec3 gauge_fixed_arrow(double lambda, const Vec3& axis);

// Squared distance between the gauge-fixed arrows of two configurations,
// per vertex.
std::vector<double> squared_arrow_distances(const FieldConfig& a, const FieldConfig& b);

nlohmann::json estimate_to_json(const FieldEstimate& e);

}  // namespace strayfield
