#include "strayfield/multibasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strayfield/nelder_mead.hpp"
#include "strayfield/rng.hpp"
#include "strayfield/simulator.hpp"

namespace strayfield {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  return {v[0] / len, v[1] / len, v[2] / len};
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start, const NelderMeadOptions& options) {
  const int dim = static_cast<int>(start.size());
  if (dim < 1) throw std::invalid_argument("empty start point");

  // Gao & Han adaptive coefficients.
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dim;
  const double gamma = 0.75 - 1.0 / (2.0 * dim);
  const double delta = 1.0 - 1.0 / dim;

  std::vector<std::vector<double>> simplex(static_cast<std::size_t>(dim) + 1, start);
  for (int i = 0; i < dim; ++i) simplex[static_cast<std::size_t>(i) + 1][i] += options.initial_step;
  std::vector<double> values;
  values.reserve(simplex.size());
  for (const auto& x : simplex) values.push_back(f(x));

  NelderMeadResult result;
  result.iterations = dim + 1;

  std::vector<std::size_t> order(simplex.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  while (result.iterations < options.max_iterations) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    double diameter = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (const auto& x : simplex) diameter = std::max(diameter, std::abs(x[i] - simplex[best][i]));
    }
    if (values[worst] - values[best] < options.f_tolerance && diameter < options.x_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == worst) continue;
      for (int c = 0; c < dim; ++c) centroid[c] += simplex[i][c];
    }
    for (double& c : centroid) c /= dim;

    auto blend = [&](double t) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (int c = 0; c < dim; ++c) x[c] = centroid[c] + t * (centroid[c] - simplex[worst][c]);
      return x;
    };

    const std::vector<double> reflected = blend(alpha);
    const double f_reflected = f(reflected);
    ++result.iterations;

    if (f_reflected < values[best]) {
      const std::vector<double> expanded = blend(beta);
      const double f_expanded = f(expanded);
      ++result.iterations;
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    // contraction (outside when the reflection helped at least the worst)
    const bool outside = f_reflected < values[worst];
    const std::vector<double> contracted = blend(outside ? gamma : -gamma);
    const double f_contracted = f(contracted);
    ++result.iterations;
    if (f_contracted < std::min(values[worst], f_reflected)) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      for (int c = 0; c < dim; ++c) {
        simplex[i][c] = simplex[best][c] + delta * (simplex[i][c] - simplex[best][c]);
      }
      values[i] = f(simplex[i]);
      ++result.iterations;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < simplex.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  result.x = simplex[best];
  result.fmin = values[best];
  return result;
}

LogicalBasis random_basis(Rng& rng) {
  // Shoemake's subgroup algorithm: uniform quaternion -> uniform rotation.
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double w = a * std::sin(kTwoPi * u2);
  const double x = a * std::cos(kTwoPi * u2);
  const double y = b * std::sin(kTwoPi * u3);
  const double z = b * std::cos(kTwoPi * u3);

  const Vec3 r{1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y + w * z), 2.0 * (x * z - w * y)};
  const Vec3 s{2.0 * (x * y - w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z + w * x)};
  Vec3 rn = normalized(r);
  Vec3 sn = normalized(s);
  return LogicalBasis(rn, sn, cross(rn, sn));
}

LogicalBasis random_basis(std::uint64_t seed) {
  Rng rng(seed);
  return random_basis(rng);
}

double cost(const FieldConfig& cfg, const Graph& g, const MultiBasisDataset& data) {
  if (data.bases.size() != data.measured.size()) {
    throw std::invalid_argument("dataset has mismatched bases and measurements");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < data.bases.size(); ++k) {
    if (static_cast<int>(data.measured[k].size()) != g.vertex_count()) {
      throw std::invalid_argument("measurement row size does not match graph");
    }
    for (int a = 1; a <= g.vertex_count(); ++a) {
      const double model = delta_p_rotated(cfg, g, data.bases[k], a);
      const double diff = model - data.measured[k][static_cast<std::size_t>(a - 1)];
      total += diff * diff;
    }
  }
  return total;
}

MultiBasisDataset exact_dataset(const Graph& g, const FieldConfig& cfg,
                                const std::vector<LogicalBasis>& bases) {
  MultiBasisDataset data;
  data.bases = bases;
  data.rounds = 0;
  for (const LogicalBasis& basis : bases) {
    data.measured.push_back(delta_p_rotated_all(cfg, g, basis).values);
  }
  return data;
}

MultiBasisDataset sampled_dataset(const Graph& g, const FieldConfig& cfg,
                                  const std::vector<LogicalBasis>& bases, long long rounds,
                                  std::uint64_t seed) {
  MultiBasisDataset data;
  data.bases = bases;
  data.rounds = rounds;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const ProbabilityDifferences dp = delta_p_rotated_all(cfg, g, bases[k]);
    const SyndromeStats stats = sample_syndromes(dp, rounds, Rng::child_seed(seed, k));
    data.measured.push_back(stats.delta_r());
  }
  return data;
}

namespace {

// Parameter block layout: (lambda, theta, phi) per vertex; n is the usual
// spherical unit vector. The cost only sees cos(lambda) and squared dot
// products, so the optimizer can roam freely and we canonicalize at the end.
FieldConfig params_to_config(const std::vector<double>& p) {
  std::vector<VertexField> fields;
  fields.reserve(p.size() / 3);
  for (std::size_t i = 0; i + 2 < p.size(); i += 3) {
    const double theta = p[i + 1];
    const double phi = p[i + 2];
    Vec3 n{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    const double len = norm(n);
    fields.push_back({p[i], {n[0] / len, n[1] / len, n[2] / len}});
  }
  return FieldConfig(std::move(fields));
}

FieldConfig canonicalize(const FieldConfig& cfg) {
  std::vector<VertexField> fields;
  fields.reserve(static_cast<std::size_t>(cfg.size()));
  for (int a = 1; a <= cfg.size(); ++a) {
    const double lambda = std::acos(std::clamp(cfg.beta(a), -1.0, 1.0));
    fields.push_back({lambda, cfg.axis(a)});
  }
  return FieldConfig(std::move(fields));  // constructor restores n_y >= 0
}

}  // namespace

FieldEstimate estimate_fields(const Graph& g, const MultiBasisDataset& data,
                              const EstimateOptions& options, std::uint64_t seed) {
  const int n = g.vertex_count();
  const int dim = 3 * n;

  auto objective = [&](const std::vector<double>& p) { return cost(params_to_config(p), g, data); };

  FieldEstimate estimate{FieldConfig::aligned(Axis::Z, std::vector<double>(n, 0.0))};
  estimate.underdetermined_warning =
      options.warn_underdetermined && data.basis_count() * n < dim;

  Rng rng(seed);
  std::vector<double> best_x;
  double best_cost = std::numeric_limits<double>::infinity();
  long long evaluations = 0;
  bool converged = false;
  std::vector<std::pair<double, std::vector<double>>> winners;

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.f_tolerance = options.f_tolerance;

  for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
    std::vector<double> start(static_cast<std::size_t>(dim));
    for (int a = 0; a < n; ++a) {
      start[3 * a] = rng.uniform(0.0, kPi);           // lambda
      start[3 * a + 1] = std::acos(1.0 - 2.0 * rng.uniform());  // polar, sphere-uniform
      start[3 * a + 2] = rng.uniform(0.0, kPi);       // azimuth, n_y >= 0 hemisphere
    }
    const NelderMeadResult run = nelder_mead(objective, start, nm);
    evaluations += run.iterations;
    winners.push_back({run.fmin, run.x});
    if (run.fmin < best_cost) {
      best_cost = run.fmin;
      best_x = run.x;
      converged = run.converged;
    }
  }

  // Polish: restart the simplex at the winner with progressively finer
  // initial steps; Nelder-Mead collapses prematurely without this.
  for (int stage = 0; stage < options.polish_stages; ++stage) {
    NelderMeadOptions polish = nm;
    polish.initial_step = (stage == 0) ? 0.02 : 2e-4;
    const NelderMeadResult run = nelder_mead(objective, best_x, polish);
    evaluations += run.iterations;
    if (run.fmin <= best_cost) {
      best_cost = run.fmin;
      best_x = run.x;
      converged = run.converged;
    }
  }

  estimate.config = canonicalize(params_to_config(best_x));
  estimate.cost_value = cost(estimate.config, g, data);
  estimate.iterations = evaluations;
  estimate.converged = converged;

  // empirical solution multiplicity: gauge-distinct restart winners whose
  // cost ties the best one
  const double cost_tie = best_cost + std::max(1e-12, 1e-6 * (1.0 + best_cost));
  std::vector<FieldConfig> clusters;
  for (const auto& [fmin, x] : winners) {
    if (fmin > cost_tie) continue;
    const FieldConfig candidate = canonicalize(params_to_config(x));
    bool fresh = true;
    for (const FieldConfig& seen : clusters) {
      double max_d2 = 0.0;
      for (double d2 : squared_arrow_distances(candidate, seen)) max_d2 = std::max(max_d2, d2);
      if (max_d2 < 1e-4) {
        fresh = false;
        break;
      }
    }
    if (fresh) clusters.push_back(candidate);
  }
  estimate.distinct_minima = static_cast<int>(clusters.size());
  return estimate;
}

Vec3 gauge_fixed_arrow(double lambda, const Vec3& axis) {
  Vec3 arrow{std::cos(lambda) * axis[0], std::cos(lambda) * axis[1], std::cos(lambda) * axis[2]};
  // opposite arrows describe the same channel; fix the hemisphere
  const double keys[3] = {arrow[2], arrow[1], arrow[0]};
  for (double key : keys) {
    if (key > 0.0) break;
    if (key < 0.0) {
      for (double& c : arrow) c = -c;
      break;
    }
  }
  return arrow;
}

std::vector<double> squared_arrow_distances(const FieldConfig& a, const FieldConfig& b) {
  if (a.size() != b.size()) throw std::invalid_argument("configuration size mismatch");
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(a.size()));
  for (int v = 1; v <= a.size(); ++v) {
    const Vec3 u = gauge_fixed_arrow(a.lambda(v), a.axis(v));
    const Vec3 w = gauge_fixed_arrow(b.lambda(v), b.axis(v));
    const Vec3 d{u[0] - w[0], u[1] - w[1], u[2] - w[2]};
    distances.push_back(dot(d, d));
  }
  return distances;
}

nlohmann::json estimate_to_json(const FieldEstimate& e) {
  return {{"config", field_config_to_json(e.config)},
          {"cost", e.cost_value},
          {"iterations", e.iterations},
          {"converged", e.converged},
          {"underdetermined_warning", e.underdetermined_warning},
          {"distinct_minima", e.distinct_minima}};
}

}  // namespace strayfield
