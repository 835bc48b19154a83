#include "strayfield/simulator.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "strayfield/statevector.hpp"

namespace strayfield {

std::vector<double> SyndromeStats::delta_r() const {
  std::vector<double> dr;
  dr.reserve(per_vertex.size());
  for (const PerVertex& v : per_vertex) dr.push_back(v.delta_r);
  return dr;
}

SyndromeStats sample_syndromes(const ProbabilityDifferences& dp, long long rounds, RandomSeed seed) {
  if (rounds < 1) throw std::invalid_argument("round count must be >= 1");
  Rng rng(seed);
  SyndromeStats stats;
  stats.per_vertex.reserve(dp.values.size());
  for (double delta_p : dp.values) {
    if (delta_p < -1.0 || delta_p > 1.0) {
      throw std::invalid_argument("probability difference outside [-1, 1]");
    }
    SyndromeStats::PerVertex v;
    v.rounds = rounds;
    v.count0 = rng.binomial(rounds, (1.0 + delta_p) / 2.0);
    v.count1 = rounds - v.count0;
    v.delta_r = static_cast<double>(v.count0 - v.count1) / static_cast<double>(rounds);
    stats.per_vertex.push_back(v);
  }
  return stats;
}

namespace {

// K_a |psi> with K_a = (r.S)_a prod_{b in N_a} (t.S)_b.
StateVector apply_correlator(const StateVector& psi, const Graph& g, int a,
                             const LogicalBasis& basis) {
  StateVector phi = psi;
  phi.apply_pauli_direction(a, basis.r());
  for (int b : g.neighbors(a)) phi.apply_pauli_direction(b, basis.t());
  return phi;
}

StateVector prepare_noisy_graph_state(const Graph& g, const FieldConfig& cfg,
                                      const std::optional<LogicalBasis>& basis) {
  StateVector psi = StateVector::graph_state(g);
  if (basis) {
    // The logical-basis graph state is R^{(x)n} |G>, the image of |G> under
    // the frame rotation that takes (X, Y, Z) to (r.S, s.S, t.S).
    const SingleQubitGate r = basis_change_gate(*basis);
    for (int q = 1; q <= g.vertex_count(); ++q) psi.apply_single(q, r);
  }
  psi.apply_field(cfg);
  return psi;
}

}  // namespace

double statevector_delta_p(const Graph& g, const FieldConfig& cfg, int a,
                           const std::optional<LogicalBasis>& basis) {
  if (g.vertex_count() > kStateVectorQubitCap) {
    throw std::invalid_argument("graph exceeds the 12-qubit oracle cap");
  }
  if (g.has_isolated_vertex()) {
    throw std::invalid_argument("oracle requires a graph without isolated vertices");
  }
  if (cfg.size() != g.vertex_count()) {
    throw std::invalid_argument("field configuration size does not match graph");
  }
  const LogicalBasis frame = basis ? *basis : LogicalBasis::standard();
  const StateVector psi = prepare_noisy_graph_state(g, cfg, basis);
  const StateVector k_psi = apply_correlator(psi, g, a, frame);
  return psi.inner(k_psi).real();
}

SyndromeStats sample_joint_syndromes(const Graph& g, const FieldConfig& cfg, long long rounds,
                                     RandomSeed seed) {
  if (rounds < 1) throw std::invalid_argument("round count must be >= 1");
  if (g.vertex_count() > kStateVectorQubitCap) {
    throw std::invalid_argument("graph exceeds the 12-qubit oracle cap");
  }
  if (g.has_isolated_vertex()) {
    throw std::invalid_argument("oracle requires a graph without isolated vertices");
  }
  const int n = g.vertex_count();
  const LogicalBasis frame = LogicalBasis::standard();
  const StateVector prepared = prepare_noisy_graph_state(g, cfg, std::nullopt);

  Rng rng(seed);
  SyndromeStats stats;
  stats.per_vertex.assign(static_cast<std::size_t>(n), {});
  for (auto& v : stats.per_vertex) v.rounds = rounds;

  for (long long round = 0; round < rounds; ++round) {
    StateVector psi = prepared;
    for (int a = 1; a <= n; ++a) {
      StateVector k_psi = apply_correlator(psi, g, a, frame);
      const double expectation = psi.inner(k_psi).real();
      const double p0 = std::min(1.0, std::max(0.0, (1.0 + expectation) / 2.0));
      const bool outcome0 = rng.bernoulli(p0);
      // project onto (1 +- K_a)/2 and renormalize
      if (outcome0) {
        psi += k_psi;
      } else {
        psi -= k_psi;
      }
      psi.scale(0.5);
      psi.normalize();
      auto& tally = stats.per_vertex[static_cast<std::size_t>(a - 1)];
      (outcome0 ? tally.count0 : tally.count1) += 1;
    }
  }
  for (auto& v : stats.per_vertex) {
    v.delta_r = static_cast<double>(v.count0 - v.count1) / static_cast<double>(rounds);
  }
  return stats;
}

FieldConfig perturb_axes(const FieldConfig& cfg, Axis axis, double epsilon, RandomSeed seed) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
  Rng rng(seed);
  std::vector<VertexField> fields;
  fields.reserve(static_cast<std::size_t>(cfg.size()));
  for (int a = 1; a <= cfg.size(); ++a) {
    const double transverse2 = std::min(1.0, rng.uniform(0.0, 2.0 * epsilon));
    const double aligned = std::sqrt(1.0 - transverse2);
    const double rho = std::sqrt(transverse2);
    const double chi = rng.uniform(0.0, 2.0 * 3.141592653589793238462643383279502884);
    Vec3 n{};
    switch (axis) {
      case Axis::X: n = {aligned, rho * std::cos(chi), rho * std::sin(chi)}; break;
      case Axis::Y: n = {rho * std::sin(chi), aligned, rho * std::cos(chi)}; break;
      case Axis::Z: n = {rho * std::cos(chi), rho * std::sin(chi), aligned}; break;
    }
    fields.push_back({cfg.lambda(a), n});
  }
  return FieldConfig(std::move(fields));
}

void write_syndrome_csv(std::ostream& out, const SyndromeStats& stats) {
  out << "vertex,M,count0,count1,delta_r\n";
  for (std::size_t i = 0; i < stats.per_vertex.size(); ++i) {
    const auto& v = stats.per_vertex[i];
    out << (i + 1) << ',' << v.rounds << ',' << v.count0 << ',' << v.count1 << ','
        << v.delta_r << '\n';
  }
}

SyndromeStats read_syndrome_csv(std::istream& in) {
  SyndromeStats stats;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty syndrome CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw std::invalid_argument("syndrome CSV rows need 5 columns");
    SyndromeStats::PerVertex v;
    v.rounds = std::stoll(fields[1]);
    v.count0 = std::stoll(fields[2]);
    v.count1 = std::stoll(fields[3]);
    v.delta_r = std::stod(fields[4]);
    stats.per_vertex.push_back(v);
  }
  return stats;
}

}  // namespace strayfield
