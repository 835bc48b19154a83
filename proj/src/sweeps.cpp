#include "strayfield/sweeps.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "strayfield/errors.hpp"
#include "strayfield/multibasis.hpp"
#include "strayfield/rng.hpp"
#include "strayfield/simulator.hpp"
#include "strayfield/spectra.hpp"

namespace strayfield {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

ReconstructionExperiment::ReconstructionExperiment(const Graph& g, Axis axis)
    : graph_(g), axis_(axis), pipeline_(g, axis) {
  if (pipeline_.singular()) {
    throw SingularSystemError("sweep requires a nonsingular graph/axis combination");
  }
}

namespace {

FieldConfig reversed_config(const FieldConfig& cfg) {
  std::vector<VertexField> fields(cfg.fields().rbegin(), cfg.fields().rend());
  return FieldConfig(std::move(fields));
}

}  // namespace

TrialResult ReconstructionExperiment::run_trial(const TrialSettings& settings,
                                                std::uint64_t seed) const {
  Rng rng(seed);
  const int n = graph_.vertex_count();
  const std::uint64_t seed_lambda = rng.next_u64();
  const std::uint64_t seed_tilt = rng.next_u64();
  const std::uint64_t seed_noise = rng.next_u64();

  Rng lambda_rng(seed_lambda);
  std::vector<double> lambdas(static_cast<std::size_t>(n));
  for (double& l : lambdas) l = lambda_rng.uniform(0.0, kPi);
  FieldConfig truth = FieldConfig::aligned(axis_, lambdas);
  FieldConfig tilted = perturb_axes(truth, axis_, settings.epsilon, seed_tilt);
  if (settings.mirror) {
    // the mirror-image experiment: reversed fields, reversed tilts and
    // reversed noise streams, so a mirror-symmetric graph sees the exact
    // reflected trial
    truth = reversed_config(truth);
    tilted = reversed_config(tilted);
  }

  ProbabilityDifferences dp = delta_p_general_all(tilted, graph_);
  dp = apply_depolarizing(dp, settings.q);

  // per-vertex binomial sampling on child streams keyed by the mirrored
  // vertex identity (equivalent to sample_syndromes, stream layout aside)
  std::vector<double> delta_r(static_cast<std::size_t>(n));
  for (int a = 1; a <= n; ++a) {
    const std::uint64_t stream_index =
        settings.mirror ? static_cast<std::uint64_t>(n - a) : static_cast<std::uint64_t>(a - 1);
    Rng vertex_rng(Rng::child_seed(seed_noise, stream_index));
    const long long count0 = vertex_rng.binomial(settings.rounds, (1.0 + dp.at(a)) / 2.0);
    delta_r[static_cast<std::size_t>(a - 1)] =
        static_cast<double>(2 * count0 - settings.rounds) / static_cast<double>(settings.rounds);
  }

  ReconstructOptions options;
  options.real_tol = kSampledRealTol;
  options.clamp_rates = 1.0 / (2.0 * static_cast<double>(settings.rounds));
  options.strict = false;

  const ReconstructionResult result = pipeline_.run(delta_r, options);

  TrialResult trial;
  trial.fallback = result.physical_indices.empty();
  trial.error.resize(static_cast<std::size_t>(n), 0.0);
  const Candidate& chosen = result.candidates.at(static_cast<std::size_t>(*result.chosen));
  for (int a = 1; a <= n; ++a) {
    trial.error[static_cast<std::size_t>(a - 1)] =
        reconstruction_error(truth.lambda(a), chosen.beta[static_cast<std::size_t>(a - 1)]);
  }
  return trial;
}

std::vector<SweepPoint> run_sweep(const Graph& g, Axis axis, const SweepSettings& settings) {
  if (settings.configurations < 1) throw std::invalid_argument("need at least one configuration");
  ReconstructionExperiment experiment(g, axis);
  const int n = g.vertex_count();

  std::vector<SweepPoint> points;
  for (std::size_t pi = 0; pi < settings.values.size(); ++pi) {
    TrialSettings trial = settings.reference;
    const double value = settings.values[pi];
    if (settings.parameter == "q") {
      trial.q = value;
    } else if (settings.parameter == "eps") {
      trial.epsilon = value;
    } else if (settings.parameter == "M") {
      trial.rounds = static_cast<long long>(std::llround(value));
    } else {
      throw std::invalid_argument("sweep parameter must be q, eps or M");
    }

    SweepPoint point;
    point.value = value;
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sum_sq(static_cast<std::size_t>(n), 0.0);
    const std::uint64_t point_seed =
        Rng::child_seed(settings.seed, settings.common_configs ? 0 : pi);
    for (int rep = 0; rep < settings.configurations; ++rep) {
      std::uint64_t trial_seed = Rng::child_seed(point_seed, static_cast<std::uint64_t>(rep));
      if (settings.antithetic) {
        trial_seed = Rng::child_seed(point_seed, static_cast<std::uint64_t>(rep / 2));
        trial.mirror = rep % 2 == 1;
      }
      const TrialResult r = experiment.run_trial(trial, trial_seed);
      point.failed += r.fallback ? 1 : 0;
      for (int i = 0; i < n; ++i) {
        sum[static_cast<std::size_t>(i)] += r.error[static_cast<std::size_t>(i)];
        sum_sq[static_cast<std::size_t>(i)] += r.error[static_cast<std::size_t>(i)] * r.error[static_cast<std::size_t>(i)];
      }
    }
    const double reps = static_cast<double>(settings.configurations);
    point.mean_error.resize(static_cast<std::size_t>(n));
    point.std_error.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double mean = sum[static_cast<std::size_t>(i)] / reps;
      const double var = std::max(0.0, sum_sq[static_cast<std::size_t>(i)] / reps - mean * mean);
      point.mean_error[static_cast<std::size_t>(i)] = mean;
      point.std_error[static_cast<std::size_t>(i)] = std::sqrt(var / reps);
    }
    points.push_back(std::move(point));
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "param,vertex,mean_error,std_error,n_failed\n";
  for (const SweepPoint& p : points) {
    for (std::size_t i = 0; i < p.mean_error.size(); ++i) {
      out << p.value << ',' << (i + 1) << ',' << p.mean_error[i] << ',' << p.std_error[i] << ','
          << p.failed << '\n';
    }
  }
}

nlohmann::json sweep_metadata(const Graph& g, Axis axis, const SweepSettings& settings) {
  return {{"graph", graph_to_json(g)},
          {"axis", axis_name(axis)},
          {"parameter", settings.parameter},
          {"values", settings.values},
          {"reference", {{"q", settings.reference.q},
                         {"eps", settings.reference.epsilon},
                         {"M", settings.reference.rounds}}},
          {"configurations", settings.configurations},
          {"seed", settings.seed},
          {"common_configs", settings.common_configs},
          {"antithetic", settings.antithetic},
          {"field_magnitude_ensemble", "lambda ~ uniform[0, pi] per vertex per repetition"},
          {"clamp_rates", "|dR| < 1/(2M) replaced by sign-preserving 1/(2M)"}};
}

std::vector<Fig0Cell> singularity_grid(int max_size) {
  std::vector<Fig0Cell> cells;
  for (const char* axis_tag : {"x", "y"}) {
    const Axis axis = axis_from_string(axis_tag);
    for (int m1 = 1; m1 <= max_size; ++m1) {
      for (int m2 = 1; m2 <= max_size; ++m2) {
        // closed dimensions first in the eigenvalue convention
        const bool planar = lattice_is_singular({m1, m2}, 0, axis);
        const bool cylinder = lattice_is_singular({m2, m1}, 1, axis);  // m2 closed, m1 open
        const bool torus = lattice_is_singular({m1, m2}, 2, axis);
        cells.push_back({m1, m2, std::string(axis_tag) + "_planar", planar});
        cells.push_back({m1, m2, std::string(axis_tag) + "_cylinder", cylinder});
        cells.push_back({m1, m2, std::string(axis_tag) + "_torus", torus});
      }
    }
  }
  return cells;
}

void write_fig0_csv(std::ostream& out, const std::vector<Fig0Cell>& cells) {
  out << "m1,m2,panel,singular\n";
  for (const Fig0Cell& c : cells) {
    out << c.m1 << ',' << c.m2 << ',' << c.panel << ',' << (c.singular ? 1 : 0) << '\n';
  }
}

OracleCheckResult run_oracle_check(int configs_per_graph, std::uint64_t seed) {
  std::vector<Graph> battery;
  for (int m = 2; m <= 6; ++m) battery.push_back(make_open_chain(m));
  for (int m = 3; m <= 6; ++m) battery.push_back(make_closed_chain(m));
  for (int n = 3; n <= 5; ++n) battery.push_back(make_ghz_complete(n));
  for (int n = 3; n <= 5; ++n) battery.push_back(make_ghz_star(n));
  battery.push_back(make_lattice({2, 2}, {Boundary::Open, Boundary::Open}));
  battery.push_back(make_lattice({2, 3}, {Boundary::Open, Boundary::Closed}));
  battery.push_back(make_steane5plus1());

  OracleCheckResult result;
  Rng rng(seed);
  for (const Graph& g : battery) {
    for (int rep = 0; rep < configs_per_graph; ++rep) {
      std::vector<VertexField> fields;
      for (int a = 0; a < g.vertex_count(); ++a) {
        fields.push_back({rng.uniform(0.0, 2.0 * kPi), rng.unit_sphere()});
      }
      const FieldConfig cfg{std::move(fields)};
      const LogicalBasis basis = random_basis(rng);
      for (int a = 1; a <= g.vertex_count(); ++a) {
        const double dev_general =
            std::abs(delta_p_general(cfg, g, a) - statevector_delta_p(g, cfg, a));
        const double dev_rotated =
            std::abs(delta_p_rotated(cfg, g, basis, a) - statevector_delta_p(g, cfg, a, basis));
        result.max_deviation_general = std::max(result.max_deviation_general, dev_general);
        result.max_deviation_rotated = std::max(result.max_deviation_rotated, dev_rotated);
        ++result.cases;
      }
    }
  }

  // aligned-promise configurations on chains: exact regime
  for (int m = 4; m <= 6; ++m) {
    for (const Graph& g : {make_open_chain(m), make_closed_chain(m)}) {
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        if (g.edges().size() == static_cast<std::size_t>(m) && m == 4 && axis == Axis::X) {
          continue;  // the 4-cycle carries a surviving x-type cross term
        }
        for (int rep = 0; rep < configs_per_graph; ++rep) {
          std::vector<double> lambdas(static_cast<std::size_t>(m));
          for (double& l : lambdas) l = rng.uniform(0.0, kPi);
          const FieldConfig cfg = FieldConfig::aligned(axis, lambdas);
          for (int a = 1; a <= m; ++a) {
            const double dev =
                std::abs(delta_p_general(cfg, g, a) - statevector_delta_p(g, cfg, a));
            result.max_deviation_aligned_chains =
                std::max(result.max_deviation_aligned_chains, dev);
            ++result.cases;
          }
        }
      }
    }
  }
  return result;
}

}  // namespace strayfield
