// strayfield: simulate stabilizer-syndrome statistics of graph states under
// local stray-field channels and reconstruct the per-qubit field parameters.
//
// Commands write plot-ready CSV/JSON into --out (default "."); every command
// is deterministic under --seed and data files carry no timestamps.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "strayfield/analysis.hpp"
#include "strayfield/channel.hpp"
#include "strayfield/errors.hpp"
#include "strayfield/graph.hpp"
#include "strayfield/multibasis.hpp"
#include "strayfield/reconstruct.hpp"
#include "strayfield/rng.hpp"
#include "strayfield/simulator.hpp"
#include "strayfield/spectra.hpp"
#include "strayfield/sweeps.hpp"

namespace sf = strayfield;
using nlohmann::json;

namespace {

sf::Graph load_graph(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    json j;
    in >> j;
    return sf::graph_from_json(j);
  }
  return sf::make_graph_from_spec(arg);
}

sf::FieldConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open field configuration '" + path + "'");
  json j;
  in >> j;
  return sf::field_config_from_json(j);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

sf::SyndromeStats load_rates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open rates CSV '" + path + "'");
  return sf::read_syndrome_csv(in);
}

struct CommonArgs {
  std::string graph;
  std::string axis = "z";
  double q = 0.01;
  double eps = 0.01;
  long long rounds = 10000;
  int reps = 10000;
  std::uint64_t seed = 1;
  double clamp_rates = -1.0;  // negative: default 1/(2M)
  std::string out = ".";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-state stray-field estimation toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* cmd, bool needs_graph = true) {
    if (needs_graph) {
      cmd->add_option("--graph", args.graph, "graph JSON file or generator spec")->required();
    }
    cmd->add_option("--axis", args.axis, "promise axis: x, y or z");
    cmd->add_option("--q", args.q, "depolarizing strength");
    cmd->add_option("--eps", args.eps, "axis misalignment scale");
    cmd->add_option("--M", args.rounds, "measurement rounds per correlator");
    cmd->add_option("--reps", args.reps, "ensemble size / repetitions");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--clamp-rates", args.clamp_rates,
                    "replace |dR| below this by a sign-preserving floor (default 1/(2M))");
    cmd->add_option("--out", args.out, "output directory");
  };

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "emit a generated graph as JSON");
  add_common(gen);

  // solvability
  auto* solv = app.add_subcommand("solvability", "determinant / rank-defect report");
  add_common(solv);

  // fig0
  auto* fig0 = app.add_subcommand("fig0", "square-lattice singularity grids (6 panels)");
  int fig0_size = 20;
  fig0->add_option("--size", fig0_size, "maximum lattice extent");
  add_common(fig0, false);

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample syndrome statistics");
  std::string sim_config;
  sim->add_option("--config", sim_config, "field configuration JSON")->required();
  bool sim_joint = false;
  sim->add_flag("--joint", sim_joint, "use the exact joint sampler (n <= 12)");
  add_common(sim);

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "invert measured rate differences");
  std::string rec_rates;
  rec->add_option("--rates", rec_rates, "syndrome CSV (as written by simulate)")->required();
  double rec_tol = sf::kSampledRealTol;
  rec->add_option("--real-tol", rec_tol, "imaginary-part acceptance band");
  add_common(rec);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "noise sweeps of the reconstruction error");
  std::string sweep_param = "M";
  std::vector<double> sweep_values;
  sweep->add_option("--param", sweep_param, "swept parameter: q, eps or M")->required();
  sweep->add_option("--values", sweep_values, "sweep values")->required();
  add_common(sweep);

  // multibasis
  auto* multi = app.add_subcommand("multibasis", "general estimation from several bases");
  std::string multi_config;
  std::string multi_measured;
  int multi_bases = 4;
  int multi_restarts = 20;
  auto* cfg_opt =
      multi->add_option("--config", multi_config, "ground-truth field JSON (simulate mode)");
  auto* measured_opt = multi->add_option(
      "--measured", multi_measured,
      "measured rates CSV (basis,vertex,delta_r); bases are regenerated from --seed");
  cfg_opt->excludes(measured_opt);
  multi->add_option("--bases", multi_bases, "number of random logical Pauli bases");
  multi->add_option("--restarts", multi_restarts, "local-search restarts");
  add_common(multi);

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "closed form vs state-vector battery");
  int oracle_configs = 10;
  oracle->add_option("--configs", oracle_configs, "configurations per graph");
  add_common(oracle, false);

  // analyze
  auto* ana = app.add_subcommand("analyze", "error-propagation diagnostics");
  double ana_r = 0.1, ana_upper = 1.0, ana_dw = 0.0;
  ana->add_option("--r", ana_r, "lower bound on |v|_inf for the perturbation bound");
  ana->add_option("--R", ana_upper, "upper bound on |v|_inf for the perturbation bound");
  ana->add_option("--dw", ana_dw, "rate-vector perturbation norm |dw|_inf");
  add_common(ana);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::filesystem::path out_dir(args.out);
    std::filesystem::create_directories(out_dir);
    const sf::Axis axis = sf::axis_from_string(args.axis);

    if (*gen) {
      const sf::Graph g = load_graph(args.graph);
      write_json(out_dir / "graph.json", sf::graph_to_json(g));
    }

    if (*solv) {
      const sf::Graph g = load_graph(args.graph);
      const json j = sf::solvability_to_json(sf::solvability_report(g, axis));
      std::cout << j.dump(2) << "\n";
      write_json(out_dir / "solvability.json", j);
    }

    if (*fig0) {
      std::ostringstream csv;
      sf::write_fig0_csv(csv, sf::singularity_grid(fig0_size));
      write_text(out_dir / "fig0.csv", csv.str());
    }

    if (*sim) {
      const sf::Graph g = load_graph(args.graph);
      const sf::FieldConfig cfg = load_config(sim_config);
      sf::SyndromeStats stats;
      if (sim_joint) {
        stats = sf::sample_joint_syndromes(g, cfg, args.rounds, args.seed);
      } else {
        sf::ProbabilityDifferences dp = sf::delta_p_general_all(cfg, g);
        dp = sf::apply_depolarizing(dp, args.q);
        stats = sf::sample_syndromes(dp, args.rounds, args.seed);
      }
      std::ostringstream csv;
      sf::write_syndrome_csv(csv, stats);
      write_text(out_dir / "syndromes.csv", csv.str());
    }

    if (*rec) {
      const sf::Graph g = load_graph(args.graph);
      const sf::SyndromeStats stats = load_rates(rec_rates);
      if (stats.per_vertex.empty()) throw std::invalid_argument("rates CSV has no rows");
      sf::ReconstructionPipeline pipeline(g, axis);
      sf::ReconstructOptions options;
      options.real_tol = rec_tol;
      // default clamp floor 1/(2M) comes from the round count in the CSV
      const double rounds = static_cast<double>(stats.per_vertex.front().rounds);
      options.clamp_rates = args.clamp_rates >= 0.0 ? args.clamp_rates : 1.0 / (2.0 * rounds);
      const sf::ReconstructionResult result = pipeline.run(stats.delta_r(), options);
      write_json(out_dir / "reconstruction.json", sf::reconstruction_to_json(result));
    }

    if (*sweep) {
      const sf::Graph g = load_graph(args.graph);
      sf::SweepSettings settings;
      settings.parameter = sweep_param;
      settings.values = sweep_values;
      settings.reference.q = args.q;
      settings.reference.epsilon = args.eps;
      settings.reference.rounds = args.rounds;
      settings.configurations = args.reps;
      settings.seed = args.seed;
      const auto points = sf::run_sweep(g, axis, settings);
      std::ostringstream csv;
      sf::write_sweep_csv(csv, points);
      write_text(out_dir / ("sweep_" + sweep_param + ".csv"), csv.str());
      write_json(out_dir / "sweep_meta.json", sf::sweep_metadata(g, axis, settings));
    }

    if (*multi) {
      const sf::Graph g = load_graph(args.graph);
      std::vector<sf::LogicalBasis> bases;
      sf::Rng basis_rng(sf::Rng::child_seed(args.seed, 0));
      for (int i = 0; i < multi_bases; ++i) bases.push_back(sf::random_basis(basis_rng));

      sf::EstimateOptions options;
      options.restarts = multi_restarts;

      if (!multi_measured.empty()) {
        // measured mode: fit rates collected elsewhere; the logical bases
        // are regenerated from the seed that was used to produce them
        sf::MultiBasisDataset data;
        data.bases = bases;
        data.rounds = args.rounds;
        data.measured.assign(bases.size(),
                             std::vector<double>(static_cast<std::size_t>(g.vertex_count()), 0.0));
        std::ifstream in(multi_measured);
        if (!in) throw std::invalid_argument("cannot open measured CSV '" + multi_measured + "'");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::istringstream row(line);
          std::string basis_s, vertex_s, dr_s;
          if (!std::getline(row, basis_s, ',') || !std::getline(row, vertex_s, ',') ||
              !std::getline(row, dr_s, ',')) {
            throw std::invalid_argument("measured CSV rows need basis,vertex,delta_r");
          }
          const std::size_t b = std::stoul(basis_s);
          const int vertex = std::stoi(vertex_s);
          if (b >= bases.size() || vertex < 1 || vertex > g.vertex_count()) {
            throw std::invalid_argument("measured CSV index out of range");
          }
          data.measured[b][static_cast<std::size_t>(vertex - 1)] = std::stod(dr_s);
        }
        const sf::FieldEstimate estimate =
            sf::estimate_fields(g, data, options, sf::Rng::child_seed(args.seed, 5000));
        write_json(out_dir / "estimate.json", sf::estimate_to_json(estimate));
        return 0;
      }

      if (multi_config.empty()) {
        throw std::invalid_argument("multibasis needs --config (simulate) or --measured");
      }
      const sf::FieldConfig truth = load_config(multi_config);
      std::ostringstream distances;
      distances << "rep,vertex,squared_distance\n";
      std::ostringstream measured;
      measured << "basis,vertex,delta_r\n";
      json best_estimate;
      for (int rep = 0; rep < args.reps; ++rep) {
        const sf::MultiBasisDataset data =
            sf::sampled_dataset(g, truth, bases, args.rounds, sf::Rng::child_seed(args.seed, 100 + rep));
        const sf::FieldEstimate estimate =
            sf::estimate_fields(g, data, options, sf::Rng::child_seed(args.seed, 5000 + rep));
        const std::vector<double> d2 = sf::squared_arrow_distances(estimate.config, truth);
        for (std::size_t a = 0; a < d2.size(); ++a) {
          distances << rep << ',' << (a + 1) << ',' << d2[a] << '\n';
        }
        if (rep == 0) {
          best_estimate = sf::estimate_to_json(estimate);
          for (std::size_t b = 0; b < data.measured.size(); ++b) {
            for (std::size_t a = 0; a < data.measured[b].size(); ++a) {
              measured << b << ',' << (a + 1) << ',' << data.measured[b][a] << '\n';
            }
          }
        }
      }
      write_json(out_dir / "estimate.json", best_estimate);
      write_text(out_dir / "distances.csv", distances.str());
      write_text(out_dir / "measured.csv", measured.str());
    }

    if (*oracle) {
      const sf::OracleCheckResult result = sf::run_oracle_check(oracle_configs, args.seed);
      const json j = {{"cases", result.cases},
                      {"max_deviation_general", result.max_deviation_general},
                      {"max_deviation_rotated", result.max_deviation_rotated},
                      {"max_deviation_aligned_chains", result.max_deviation_aligned_chains},
                      {"aligned_chains_exact", result.max_deviation_aligned_chains < 1e-12}};
      std::cout << j.dump(2) << "\n";
      write_json(out_dir / "oracle_check.json", j);
    }

    if (*ana) {
      const sf::Graph g = load_graph(args.graph);
      const sf::SolvabilityReport report = sf::solvability_report(g, axis);
      json j = sf::solvability_to_json(report);
      if (report.determinant != 0) {
        const sf::IntegerMatrix a_s = g.promise_matrix(axis);
        const sf::DepolarizingSensitivity sens = sf::depolarizing_sensitivity(a_s);
        j["depolarizing_sensitivity"] = sens.values;
        j["resilient_vertices"] = sens.resilient_vertices;
        j["condition_inf"] = sf::condition_bound(a_s, 1.0, sf::NormKind::Inf);
        j["condition_two"] = sf::condition_bound(a_s, 1.0, sf::NormKind::Two);
        j["volume_ratio"] = 1.0 / std::abs(static_cast<double>(report.determinant));

        sf::PerturbationBoundInput input;
        input.r = ana_r;
        input.upper = ana_upper;
        input.epsilon = args.eps;
        input.max_degree = g.max_degree();
        input.ainv_norm = sf::inverse_inf_norm(a_s);
        input.dw_norm = ana_dw;
        const sf::PerturbationBoundResult bound = sf::perturbation_bound(input);
        json bj = {{"r0", bound.r0},
                   {"R0", bound.R0},
                   {"C", bound.C},
                   {"applicable", bound.applicable},
                   {"condition_ok", bound.condition_ok}};
        bj["R_inf"] = bound.R_inf ? json(*bound.R_inf) : json(nullptr);
        bj["R_inf_alt"] = bound.R_inf_alt ? json(*bound.R_inf_alt) : json(nullptr);
        j["perturbation_bound"] = bj;
      }
      std::cout << j.dump(2) << "\n";
      write_json(out_dir / "analysis.json", j);
    }

    return 0;
  } catch (const sf::SingularSystemError& e) {
    std::cout << json{{"error", {{"type", "SingularSystem"}, {"message", e.what()}}}}.dump() << "\n";
  } catch (const sf::DegenerateRateError& e) {
    std::cout << json{{"error", {{"type", "DegenerateRate"}, {"message", e.what()}}}}.dump() << "\n";
  } catch (const sf::EmptyCandidateSetError& e) {
    std::cout << json{{"error", {{"type", "EmptyCandidateSet"}, {"message", e.what()}}}}.dump()
              << "\n";
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"type", "InvalidInput"}, {"message", e.what()}}}}.dump() << "\n";
  }
  return 1;
}
