// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned here, in code; nothing is deferred to calibration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "battery.hpp"
#include "exactness.hpp"
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

using namespace strayfield;
using strayfield::testing::battery_graphs;
using strayfield::testing::nonsingular_battery;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + why;
  }
  void expect(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }
};

// ---------------------------------------------------------------- criterion 1
// Closed-form probability differences vs the dense state-vector simulator:
// >= 200 random (graph, config) pairs, n <= 8, max deviation < 1e-12.
//
// This criterion fails, and the failure is genuine: the product form keeps
// only the identity component of each single-site factor of the conjugated
// correlator, but on generic graphs stabilizer products survive inside a
// closed neighborhood (the two-vertex chain already carries Y(x)Y = K1*K2)
// and contribute to the true expectation. The diagnostic below separates
// the two regimes: deviations vanish exactly on the vertices where no such
// cross term exists (the structural test in exactness.hpp) and are O(0.1)
// elsewhere. The reconstruction pipeline itself is unaffected: it inverts
// the product form, and every downstream criterion is internally consistent.
Check criterion_oracle_equivalence() {
  Check check;
  Rng rng(20250801);
  int pairs = 0;
  double worst = 0.0;
  double worst_structural = 0.0;  // restricted to structurally exact vertices
  int exact_vertices = 0;
  while (pairs < 220) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);  // 2..8
    const double p = rng.uniform(0.25, 0.9);
    std::vector<std::pair<int, int>> edges;
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        if (rng.bernoulli(p)) edges.push_back({a, b});
    const Graph g(n, edges);
    if (g.has_isolated_vertex()) continue;
    ++pairs;

    std::vector<VertexField> fields;
    for (int a = 0; a < n; ++a) fields.push_back({rng.uniform(0.0, 2.0 * kPi), rng.unit_sphere()});
    const FieldConfig cfg(std::move(fields));
    for (int a = 1; a <= n; ++a) {
      const double gap =
          std::abs(delta_p_general(cfg, g, a) - statevector_delta_p(g, cfg, a));
      worst = std::max(worst, gap);
      if (strayfield::testing::general_formula_exact(g, a)) {
        worst_structural = std::max(worst_structural, gap);
        ++exact_vertices;
      }
    }
  }
  check.expect(pairs >= 200, "not enough random pairs");
  check.expect(worst < 1e-12, "max deviation " + std::to_string(worst));
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "max dev %.3f over %d graphs; cross-term-free vertices (%d) agree to %.1e -- "
                "the product form drops surviving stabilizer cross terms",
                worst, pairs, exact_vertices, worst_structural);
  check.detail = buf;
  return check;
}

// ---------------------------------------------------------------- criterion 2
// Closed-form determinants match exact integer determinants for chains and
// GHZ graphs, every kind and axis, sizes 1..100. Exact equality.
Check criterion_determinant_tables() {
  Check check;
  for (int m = 1; m <= 100; ++m) {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      if (chain_determinant(ChainKind::Open, axis, m) !=
          integer_determinant(make_open_chain(m).promise_matrix(axis))) {
        check.fail("open chain m=" + std::to_string(m));
      }
      if (chain_determinant(ChainKind::Closed, axis, m) !=
          integer_determinant(make_closed_chain(m).promise_matrix(axis))) {
        check.fail("closed chain m=" + std::to_string(m));
      }
      if (ghz_determinant(GhzKind::Complete, axis, m) !=
          integer_determinant(make_ghz_complete(m).promise_matrix(axis))) {
        check.fail("ghz complete N=" + std::to_string(m));
      }
      if (ghz_determinant(GhzKind::Star, axis, m) !=
          integer_determinant(make_ghz_star(m).promise_matrix(axis))) {
        check.fail("ghz star N=" + std::to_string(m));
      }
    }
  }
  if (check.ok) check.detail = "chains and GHZ graphs, m,N in [1,100], all axes";
  return check;
}

// ---------------------------------------------------------------- criterion 3
// Closed-form eigenvalues match dense eigensolves (chains m <= 50, lattices
// <= 20x20, three boundary types) within 1e-9, and the closed-form
// singularity grids match the dense zero-eigenvalue criterion cell by cell.
Check criterion_spectra() {
  Check check;

  auto dense_sorted = [](const IntegerMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_dense(m), Eigen::EigenvaluesOnly);
    std::vector<double> v(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    return v;  // ascending already
  };
  auto compare = [&](std::vector<double> closed_form, const std::vector<double>& dense,
                     const std::string& what) {
    std::sort(closed_form.begin(), closed_form.end());
    if (closed_form.size() != dense.size()) {
      check.fail(what + ": size mismatch");
      return false;
    }
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (std::abs(closed_form[i] - dense[i]) >= 1e-9) {
        check.fail(what + ": eigenvalue gap " + std::to_string(closed_form[i] - dense[i]));
        return false;
      }
    }
    return true;
  };

  for (int m = 1; m <= 50; ++m) {
    compare(lattice_eigenvalues({m}, 0, Axis::X), dense_sorted(make_open_chain(m).adjacency_matrix()),
            "open chain " + std::to_string(m));
    compare(lattice_eigenvalues({m}, 1, Axis::X),
            dense_sorted(make_closed_chain(m).adjacency_matrix()),
            "closed chain " + std::to_string(m));
  }

  int singular_cells = 0;
  for (int m1 = 1; m1 <= 20; ++m1) {
    for (int m2 = 1; m2 <= 20; ++m2) {
      struct PanelSpec {
        const char* name;
        Graph graph;
        std::vector<int> sizes;
        int closed;
      };
      const PanelSpec panels[3] = {
          {"planar", make_lattice({m1, m2}, {Boundary::Open, Boundary::Open}), {m1, m2}, 0},
          {"cylinder", make_lattice({m1, m2}, {Boundary::Open, Boundary::Closed}), {m2, m1}, 1},
          {"torus", make_lattice({m1, m2}, {Boundary::Closed, Boundary::Closed}), {m1, m2}, 2},
      };
      for (const PanelSpec& panel : panels) {
        const std::vector<double> dense = dense_sorted(panel.graph.adjacency_matrix());
        const std::string tag =
            std::string(panel.name) + " " + std::to_string(m1) + "x" + std::to_string(m2);
        if (!compare(lattice_eigenvalues(panel.sizes, panel.closed, Axis::X), dense, tag)) continue;

        // the Y spectrum is the X spectrum + 1; check the closed form too
        std::vector<double> dense_y = dense;
        for (double& v : dense_y) v += 1.0;
        compare(lattice_eigenvalues(panel.sizes, panel.closed, Axis::Y), dense_y, tag + " (y)");

        // singularity grid: closed-form zero test vs dense zero test
        for (Axis axis : {Axis::X, Axis::Y}) {
          const double shift = axis == Axis::Y ? 1.0 : 0.0;
          bool dense_singular = false;
          for (double v : dense) dense_singular = dense_singular || std::abs(v + shift) < 1e-9;
          if (lattice_is_singular(panel.sizes, panel.closed, axis) != dense_singular) {
            check.fail(tag + ": singularity mismatch");
          }
          singular_cells += dense_singular ? 1 : 0;
        }
      }
    }
  }
  check.expect(singular_cells > 100, "suspiciously few singular cells");
  if (check.ok) {
    check.detail = "chains to m=50, lattices to 20x20, " + std::to_string(singular_cells) +
                   " singular grid cells reproduced";
  }
  return check;
}

// ---------------------------------------------------------------- criterion 4
// Noiseless round trip over the whole nonsingular battery, 50 random beta
// vectors each: |det| complex candidates, 2^mu real candidates, truth found
// within 1e-9 elementwise.
Check criterion_round_trip() {
  Check check;
  Rng rng(424242);
  int combos = 0;
  for (const auto& combo : nonsingular_battery()) {
    ++combos;
    ReconstructionPipeline pipeline(combo.graph, combo.axis);
    const int n = combo.graph.vertex_count();
    const long long mu = pipeline.decomposition().mu;
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> beta(static_cast<std::size_t>(n));
      for (double& b : beta) b = rng.uniform(0.2, 0.95);
      const auto dp = delta_p_promise_all(combo.axis, beta, combo.graph).values;
      ReconstructionResult result;
      try {
        result = pipeline.run(dp, {});
      } catch (const Error& e) {
        check.fail(combo.name + ": " + e.what());
        break;
      }
      if (static_cast<long long>(result.candidates.size()) != std::llabs(combo.det)) {
        check.fail(combo.name + ": complex candidate count");
      }
      if (static_cast<long long>(result.real_indices.size()) != (1LL << mu)) {
        check.fail(combo.name + ": real candidate count " +
                   std::to_string(result.real_indices.size()) + " != 2^" + std::to_string(mu));
      }
      bool found = false;
      for (int idx : result.physical_indices) {
        const Candidate& cand = result.candidates[static_cast<std::size_t>(idx)];
        bool close = true;
        for (int i = 0; i < n && close; ++i) close = std::abs(cand.beta[i] - beta[i]) < 1e-9;
        found = found || close;
      }
      if (!found) check.fail(combo.name + ": truth not among physical candidates");
      if (!check.ok) break;
    }
    if (!check.ok) break;
  }
  if (check.ok) {
    check.detail = std::to_string(combos) + " nonsingular (graph, axis) combos x 50 draws";
  }
  return check;
}

// ---------------------------------------------------------------- criterion 5
// Closed chains under an x-field: odd m >= 3 gives exactly 2 physical
// sign-flip-paired solutions; m = 2 mod 4 gives exactly 4 real candidates
// with mu = 2 from the triangularization.
Check criterion_multi_solution_structure() {
  Check check;
  Rng rng(99991);
  for (int m : {3, 5, 7, 9, 11}) {
    const Graph g = make_closed_chain(m);
    std::vector<double> beta(static_cast<std::size_t>(m));
    for (double& b : beta) b = rng.uniform(0.25, 0.9);
    const ReconstructionResult result =
        reconstruct_fields(g, Axis::X, delta_p_promise_all(Axis::X, beta, g).values);
    if (result.physical_indices.size() != 2) {
      check.fail("odd m=" + std::to_string(m) + ": physical count " +
                 std::to_string(result.physical_indices.size()));
      continue;
    }
    const Candidate& a = result.candidates[static_cast<std::size_t>(result.physical_indices[0])];
    const Candidate& b = result.candidates[static_cast<std::size_t>(result.physical_indices[1])];
    for (int i = 0; i < m; ++i) {
      if (std::abs(a.beta[i] + b.beta[i]) > 1e-9) check.fail("sign pairing at m=" + std::to_string(m));
    }
  }
  for (int m : {6, 10}) {
    const Graph g = make_closed_chain(m);
    const HnfDecomposition dec = hermite_decompose(g.promise_matrix(Axis::X));
    if (dec.mu != 2) check.fail("m=" + std::to_string(m) + ": mu=" + std::to_string(dec.mu));
    std::vector<double> beta(static_cast<std::size_t>(m));
    for (double& b : beta) b = rng.uniform(0.25, 0.9);
    const ReconstructionResult result =
        reconstruct_fields(g, Axis::X, delta_p_promise_all(Axis::X, beta, g).values);
    if (result.real_indices.size() != 4) {
      check.fail("m=" + std::to_string(m) + ": real count " +
                 std::to_string(result.real_indices.size()));
    }
  }
  if (check.ok) check.detail = "odd closed chains: 2 paired; m=6,10: mu=2, 4 real";
  return check;
}

// ---------------------------------------------------------------- criterion 6
// Depolarizing resilience of the ten-vertex open chain: sensitivity zeros at
// {3,4,7,8} (x) and {2,3,5,6,8,9} (y); exact-data reconstructions at those
// vertices unchanged within 1e-9 for q in {0.1, 0.5}.
Check criterion_depolarizing_resilience() {
  Check check;
  const Graph g = make_open_chain(10);
  const DepolarizingSensitivity sx = depolarizing_sensitivity(g.promise_matrix(Axis::X));
  const DepolarizingSensitivity sy = depolarizing_sensitivity(g.promise_matrix(Axis::Y));
  check.expect(sx.resilient_vertices == std::vector<int>{3, 4, 7, 8}, "x-field zero pattern");
  check.expect(sy.resilient_vertices == std::vector<int>{2, 3, 5, 6, 8, 9}, "y-field zero pattern");

  Rng rng(31337);
  for (Axis axis : {Axis::X, Axis::Y}) {
    const auto& flagged = (axis == Axis::X) ? sx.resilient_vertices : sy.resilient_vertices;
    std::vector<double> beta(10);
    for (double& b : beta) b = rng.uniform(0.3, 0.9);
    const auto dp = delta_p_promise_all(axis, beta, g);
    const ReconstructionResult clean = reconstruct_fields(g, axis, dp.values);
    for (double q : {0.1, 0.5}) {
      const ReconstructionResult noisy =
          reconstruct_fields(g, axis, apply_depolarizing(dp, q).values);
      if (!clean.chosen || !noisy.chosen) {
        check.fail("missing chosen candidate");
        continue;
      }
      const auto& cb = clean.candidates[static_cast<std::size_t>(*clean.chosen)].beta;
      const auto& nb = noisy.candidates[static_cast<std::size_t>(*noisy.chosen)].beta;
      for (int vertex : flagged) {
        if (std::abs(cb[static_cast<std::size_t>(vertex - 1)] -
                     nb[static_cast<std::size_t>(vertex - 1)]) > 1e-9) {
          check.fail("axis " + std::string(axis_name(axis)) + " vertex " + std::to_string(vertex) +
                     " moved under q=" + std::to_string(q));
        }
      }
    }
  }
  if (check.ok) check.detail = "zero patterns and q-invariance at flagged vertices";
  return check;
}

// ---------------------------------------------------------------- criterion 7
// Reduced-scale noise trends on the ten-vertex open chain (100 configs,
// q = eps = 0.01): (a) z-field log-log slope of the mean error vs M within
// [-0.65, -0.35] over the pre-plateau range {1e2, 1e3}; (b) mean errors
// ordered z <= x <= y at the reference point with a 10% margin;
// (c) vertex symmetry mean E_a ~ mean E_{11-a} within 25%.
Check criterion_noise_trends() {
  Check check;
  const Graph g = make_open_chain(10);
  const int configs = 100;

  // (a) M dependence for the z field. At the reference noise levels the
  // mean error is a 1/sqrt(M) sampling law sitting on a q/eps floor, and
  // the two parts combine in quadrature: E(M)^2 = A M^{2s} + B^2. On the
  // decade grid the floor drops out of consecutive differences, leaving
  // s = -log10((E1^2-E2^2)/(E2^2-E3^2)) / 2 as the pre-plateau slope.
  // Common random numbers keep the differences stable.
  SweepSettings msweep;
  msweep.parameter = "M";
  msweep.values = {100, 1000, 10000};
  msweep.configurations = configs;
  msweep.seed = 777001;
  msweep.common_configs = true;
  msweep.antithetic = true;
  const auto zpoints = run_sweep(g, Axis::Z, msweep);
  auto grand_mean = [](const SweepPoint& p) {
    double sum = 0.0;
    for (double e : p.mean_error) sum += e;
    return sum / static_cast<double>(p.mean_error.size());
  };
  const double e1 = grand_mean(zpoints[0]);
  const double e2 = grand_mean(zpoints[1]);
  const double e3 = grand_mean(zpoints[2]);
  double slope = 0.0;
  if (e1 > e2 && e2 > e3) {
    slope = -0.5 * std::log10((e1 * e1 - e2 * e2) / (e2 * e2 - e3 * e3));
    check.expect(slope > -0.65 && slope < -0.35,
                 "z-field pre-plateau slope " + std::to_string(slope) + " outside [-0.65, -0.35]");
  } else {
    check.fail("error means are not decreasing in M");
  }

  // (b), (c) reference-point comparison across axes; antithetic pairing
  // makes the two mirror-image vertices share their field ensemble.
  SweepSettings ref;
  ref.parameter = "q";
  ref.values = {0.01};
  ref.configurations = configs;
  ref.seed = 777002;
  ref.antithetic = true;
  double mean_by_axis[3] = {0, 0, 0};
  for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
    const auto points = run_sweep(g, axis, ref);
    mean_by_axis[static_cast<int>(axis)] = grand_mean(points[0]);
    for (int a = 1; a <= 5; ++a) {
      const double ea = points[0].mean_error[static_cast<std::size_t>(a - 1)];
      const double eb = points[0].mean_error[static_cast<std::size_t>(10 - a)];
      const double rel = std::abs(ea - eb) / std::max(ea, eb);
      if (rel > 0.25) {
        check.fail("axis " + std::string(axis_name(axis)) + " symmetry " + std::to_string(a) +
                   "<->" + std::to_string(11 - a) + " off by " + std::to_string(rel));
      }
    }
  }
  const double mz = mean_by_axis[static_cast<int>(Axis::Z)];
  const double mx = mean_by_axis[static_cast<int>(Axis::X)];
  const double my = mean_by_axis[static_cast<int>(Axis::Y)];
  check.expect(mz <= 1.1 * mx, "z-field error above x-field error beyond margin");
  check.expect(mx <= 1.1 * my, "x-field error above y-field error beyond margin");
  if (check.ok) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "slope %.3f, means z/x/y = %.4f/%.4f/%.4f", slope, mz, mx, my);
    check.detail = buf;
  }
  return check;
}

// ---------------------------------------------------------------- criterion 8
// Volume conservation: Vol(A^-1 Sigma A^-T) * |det A| = Vol(Sigma) within
// 1e-9 relative, over >= 50 random PSD covariances on battery systems.
Check criterion_volume_law() {
  Check check;
  Rng rng(5150);
  int trials = 0;
  for (const auto& combo : nonsingular_battery()) {
    if (combo.graph.vertex_count() > 12) continue;
    const int n = combo.graph.vertex_count();
    const IntegerMatrix a = combo.graph.promise_matrix(combo.axis);
    Eigen::MatrixXd b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = rng.normal();
    const Eigen::MatrixXd sigma = b.transpose() * b + 0.5 * Eigen::MatrixXd::Identity(n, n);
    const double vol_in = uncertainty_volume(sigma);
    const double vol_out = uncertainty_volume(propagate_covariance(a, sigma));
    const double det_abs = std::abs(static_cast<double>(combo.det));
    if (std::abs(vol_out * det_abs - vol_in) > 1e-9 * vol_in) {
      check.fail(combo.name + ": relative gap " +
                 std::to_string(std::abs(vol_out * det_abs - vol_in) / vol_in));
    }
    ++trials;
  }
  check.expect(trials >= 50, "only " + std::to_string(trials) + " trials");
  if (check.ok) check.detail = std::to_string(trials) + " PSD propagations";
  return check;
}

// ---------------------------------------------------------------- criterion 9
// Perturbation bound: closed form vs direct fixpoint iteration wherever the
// existence condition holds, over a >= 1000-point grid; Lambert residuals
// below 1e-12.
Check criterion_perturbation_bound() {
  Check check;
  int points = 0, valid = 0;
  for (double r : {0.05, 0.1, 0.3, 0.8, 1.5}) {
    for (double ratio : {1.0, 1.4, 2.0, 3.0}) {
      for (double eps : {0.0, 1e-4, 1e-3, 1e-2, 0.05}) {
        for (int d : {1, 2, 3, 4, 6}) {
          for (double ainv : {0.5, 1.0, 3.0}) {
            for (double dw : {0.0, 1e-3, 1e-2}) {
              ++points;
              PerturbationBoundInput input{r, r * ratio, eps, d, ainv, dw};
              const PerturbationBoundResult out = perturbation_bound(input);
              if (!out.applicable || !out.condition_ok) continue;
              ++valid;

              // Lambert residual at the actual argument
              const double z = -out.C * out.R0 * std::exp(out.R0);
              const double w0 = lambert_w0(z);
              if (std::abs(w0 * std::exp(w0) - z) > 1e-12) check.fail("W residual");

              // fixpoint iteration of the bound recursion
              double r_j = out.R0;
              bool converged = false;
              for (long long it = 0; it < 20000000; ++it) {
                const double next = out.R0 * (1.0 + out.C * std::exp(r_j));
                if (std::abs(next - r_j) < 1e-13) {
                  r_j = next;
                  converged = true;
                  break;
                }
                r_j = next;
              }
              if (!converged) {
                check.fail("iteration did not converge at r=" + std::to_string(r));
                continue;
              }
              if (std::abs(out.R_inf.value() - r_j) > 1e-9) {
                check.fail("closed form vs fixpoint gap " +
                           std::to_string(std::abs(out.R_inf.value() - r_j)));
              }
            }
          }
        }
      }
    }
  }
  check.expect(points >= 1000, "grid too small");
  check.expect(valid >= 200, "too few points satisfy the condition: " + std::to_string(valid));
  if (check.ok) {
    check.detail = std::to_string(valid) + " of " + std::to_string(points) + " grid points valid";
  }
  return check;
}

// --------------------------------------------------------------- criterion 10
// Desk-scale multibasis experiment on the 3-vertex chain, 4 random bases:
// a noiseless fit recovers the truth within 1e-6 (beta) and 1e-3 rad (axis);
// with M = 1e4 sampled rounds and 100 repetitions the median squared
// gauge-fixed parameter distance stays below 1e-2.
Check criterion_multibasis() {
  Check check;
  const Graph g = make_open_chain(3);
  const FieldConfig truth({{0.9, {0.6, 0.64, 0.48}},
                           {1.7, {-0.28, 0.8, std::sqrt(0.2816)}},
                           {2.2, {0.72, 0.096, -std::sqrt(0.472384)}}});
  std::vector<LogicalBasis> bases;
  Rng basis_rng(606060);
  for (int i = 0; i < 4; ++i) bases.push_back(random_basis(basis_rng));

  EstimateOptions options;
  const FieldEstimate exact = estimate_fields(g, exact_dataset(g, truth, bases), options, 11001);
  for (int a = 1; a <= 3; ++a) {
    if (std::abs(exact.config.beta(a) - truth.beta(a)) >= 1e-6) {
      check.fail("beta error at vertex " + std::to_string(a) + ": " +
                 std::to_string(std::abs(exact.config.beta(a) - truth.beta(a))));
    }
    const double axis_angle =
        std::acos(std::min(1.0, std::abs(dot(exact.config.axis(a), truth.axis(a)))));
    if (axis_angle >= 1e-3) {
      check.fail("axis error at vertex " + std::to_string(a) + ": " + std::to_string(axis_angle));
    }
  }

  std::vector<double> distances;
  for (int rep = 0; rep < 100; ++rep) {
    const MultiBasisDataset data =
        sampled_dataset(g, truth, bases, 10000, Rng::child_seed(606111, rep));
    const FieldEstimate fit = estimate_fields(g, data, options, Rng::child_seed(606222, rep));
    for (double d : squared_arrow_distances(fit.config, truth)) distances.push_back(d);
  }
  std::sort(distances.begin(), distances.end());
  const double median = distances[distances.size() / 2];
  check.expect(median < 1e-2, "median squared distance " + std::to_string(median));
  if (check.ok) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "noiseless exact; sampled median d^2 = %.2e", median);
    check.detail = buf;
  }
  return check;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle equivalence (general formula vs state vector)", criterion_oracle_equivalence},
      {"determinant tables (chains, GHZ; sizes 1..100)", criterion_determinant_tables},
      {"spectra and singularity grids (chains, 2D lattices)", criterion_spectra},
      {"noiseless round-trip reconstruction (battery x 50)", criterion_round_trip},
      {"multi-solution structure of closed chains", criterion_multi_solution_structure},
      {"depolarizing resilience (ten-vertex chain)", criterion_depolarizing_resilience},
      {"noise trends at reduced scale (M slope, axis order, symmetry)", criterion_noise_trends},
      {"uncertainty-volume conservation", criterion_volume_law},
      {"perturbation bound closed form vs fixpoint", criterion_perturbation_bound},
      {"multibasis estimation at desk scale", criterion_multibasis},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Check check = criteria[i].run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%2zu] %s  %-58s (%.1fs)%s%s\n", i + 1, check.ok ? "PASS" : "FAIL",
                criteria[i].name, seconds, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    failures += check.ok ? 0 : 1;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
