#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "strayfield/channel.hpp"
#include "strayfield/graph.hpp"
#include "strayfield/reconstruct.hpp"

namespace strayfield {

// One end-to-end repetition of the noisy reconstruction experiment:
// draw field magnitudes, misalign the axes, push through the channel,
// sample rates, reconstruct, score. Noise reference values follow the
// ten-vertex chain study: q = 0.01, eps = 0.01, M = 1e4.
struct TrialSettings {
  double q = 0.01;
  double epsilon = 0.01;
  long long rounds = 10000;
  // Reverses the drawn field magnitudes along the vertex order, giving the
  // mirror-image experiment of the same seed (antithetic pairing).
  bool mirror = false;
};

struct TrialResult {
  std::vector<double> error;  // reconstruction error per vertex
  bool fallback = false;      // candidate filters came back empty
};

class ReconstructionExperiment {
 public:
  ReconstructionExperiment(const Graph& g, Axis axis);

  // Runs one repetition with an independent child stream of `seed`.
  TrialResult run_trial(const TrialSettings& settings, std::uint64_t seed) const;

  const Graph& graph() const { return graph_; }
  Axis axis() const { return axis_; }

 private:
  Graph graph_;
  Axis axis_;
  ReconstructionPipeline pipeline_;
};

struct SweepSettings {
  std::string parameter;       // "q", "eps" or "M"
  std::vector<double> values;  // sweep values (M values are rounded)
  TrialSettings reference;     // the two fixed parameters
  int configurations = 10000;  // ensemble size per sweep point
  std::uint64_t seed = 1;
  // Variance-reduction switches. common_configs reuses the same field
  // ensemble at every sweep point (common random numbers, stabilizes
  // slopes of differences); antithetic pairs every second repetition with
  // the mirror image of the previous one, which makes vertex-symmetry
  // estimates share their field draws.
  bool common_configs = false;
  bool antithetic = false;
};

struct SweepPoint {
  double value = 0.0;
  std::vector<double> mean_error;  // per vertex
  std::vector<double> std_error;   // per vertex, std of the mean
  long long failed = 0;            // repetitions that needed the fallback
};

std::vector<SweepPoint> run_sweep(const Graph& g, Axis axis, const SweepSettings& settings);

// CSV: param,vertex,mean_error,std_error,n_failed
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
nlohmann::json sweep_metadata(const Graph& g, Axis axis, const SweepSettings& settings);

// Singularity grids of the six square-lattice panels (X/Y x planar/
// cylinder/torus). In the cylinder panels m1 counts the open direction and
// m2 the closed one.
struct Fig0Cell {
  int m1 = 0;
  int m2 = 0;
  std::string panel;
  bool singular = false;
};

std::vector<Fig0Cell> singularity_grid(int max_size);
void write_fig0_csv(std::ostream& out, const std::vector<Fig0Cell>& cells);

// Battery comparing the closed-form probability differences against the
// state-vector simulator. Random field configurations on random small
// graphs expose the cross terms the product form drops; aligned
// configurations on chains sit in the regime where the product form is the
// exact expectation, and those deviations must stay at rounding level.
struct OracleCheckResult {
  double max_deviation_general = 0.0;        // random configs, product form
  double max_deviation_rotated = 0.0;        // random configs and frames
  double max_deviation_aligned_chains = 0.0; // promise-aligned chain configs
  int cases = 0;
};

OracleCheckResult run_oracle_check(int configs_per_graph, std::uint64_t seed);

}  // namespace strayfield
