#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "battery.hpp"
#include "doctest.h"
#include "strayfield/channel.hpp"
#include "strayfield/errors.hpp"
#include "strayfield/graph.hpp"
#include "strayfield/reconstruct.hpp"
#include "strayfield/rng.hpp"
#include "strayfield/spectra.hpp"

using namespace strayfield;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

bool riemann_close(const RiemannComplex& a, const RiemannComplex& b, double tol) {
  return std::abs(a.re - b.re) < tol && riemann_im_distance(a.im, b.im) < tol;
}

// Independent enumeration route: solve Q v = w' + 2 pi i sum c_l e_l over
// plain complex numbers for every branch-index tuple, no canonicalization.
std::vector<std::vector<std::complex<double>>> enumerate_plain_complex(
    const HnfDecomposition& dec, const std::vector<RiemannComplex>& w) {
  const int n = dec.q.size();
  std::vector<std::complex<double>> w_prime(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    std::complex<double> acc{0.0, 0.0};
    for (int c = 0; c < n; ++c) {
      acc += static_cast<double>(dec.p_inv.at(r, c)) * std::complex<double>(w[c].re, w[c].im);
    }
    w_prime[static_cast<std::size_t>(r)] = acc;
  }

  std::vector<long long> ranges(static_cast<std::size_t>(n));
  long long total = 1;
  for (int l = 0; l < n; ++l) {
    ranges[static_cast<std::size_t>(l)] = std::llabs(dec.q.at(l, l));
    total *= ranges[static_cast<std::size_t>(l)];
  }

  std::vector<std::vector<std::complex<double>>> solutions;
  std::vector<long long> c(static_cast<std::size_t>(n), 0);
  for (long long idx = 0; idx < total; ++idx) {
    std::vector<std::complex<double>> rhs = w_prime;
    for (int l = 0; l < n; ++l) {
      rhs[static_cast<std::size_t>(l)] += std::complex<double>(0.0, kTwoPi * static_cast<double>(c[l]));
    }
    std::vector<std::complex<double>> v(static_cast<std::size_t>(n));
    for (int l = n - 1; l >= 0; --l) {
      std::complex<double> acc = rhs[static_cast<std::size_t>(l)];
      for (int j = l + 1; j < n; ++j) acc -= static_cast<double>(dec.q.at(l, j)) * v[static_cast<std::size_t>(j)];
      v[static_cast<std::size_t>(l)] = acc / static_cast<double>(dec.q.at(l, l));
    }
    solutions.push_back(std::move(v));
    for (int l = n - 1; l >= 0; --l) {
      if (++c[static_cast<std::size_t>(l)] < ranges[static_cast<std::size_t>(l)]) break;
      c[static_cast<std::size_t>(l)] = 0;
    }
  }
  return solutions;
}

std::vector<RiemannComplex> log_vector(const std::vector<double>& dr) {
  std::vector<RiemannComplex> w;
  w.reserve(dr.size());
  for (double x : dr) w.push_back(riemann_log(x));
  return w;
}

}  // namespace

TEST_CASE("riemann logarithm") {
  CHECK(riemann_log(1.0).re == 0.0);
  CHECK(riemann_log(1.0).im == 0.0);
  CHECK(riemann_log(-1.0).re == 0.0);
  CHECK(riemann_log(-1.0).im == doctest::Approx(kPi));
  CHECK(riemann_log(0.5).re == doctest::Approx(-0.6931471805599453));
  CHECK(riemann_log(0.5).im == 0.0);
  CHECK_THROWS_AS(riemann_log(0.0), DegenerateRateError);
}

TEST_CASE("riemann division branches") {
  const auto halves = riemann_div({0.0, 0.0}, 2);
  REQUIRE(halves.size() == 2);
  CHECK(riemann_close(halves[0], {0.0, 0.0}, 1e-15));
  CHECK(riemann_close(halves[1], {0.0, kPi}, 1e-15));

  const auto single = riemann_div({std::log(4.0), 0.0}, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].re == doctest::Approx(std::log(4.0)));

  const auto quarters = riemann_div({0.0, kPi}, 2);
  REQUIRE(quarters.size() == 2);
  CHECK(riemann_close(quarters[0], {0.0, kPi / 2.0}, 1e-15));
  CHECK(riemann_close(quarters[1], {0.0, 3.0 * kPi / 2.0}, 1e-15));

  // negative divisor: same count, canonicalized into [0, 2pi)
  const auto negative = riemann_div({0.0, 0.0}, -2);
  REQUIRE(negative.size() == 2);
  CHECK(riemann_close(negative[0], {0.0, 0.0}, 1e-15));
  CHECK(riemann_close(negative[1], {0.0, kPi}, 1e-15));

  CHECK_THROWS_AS(riemann_div({0.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("hermite decomposition basics") {
  const HnfDecomposition id = hermite_decompose(IntegerMatrix::identity(3));
  CHECK(id.q == IntegerMatrix::identity(3));
  CHECK(id.p_inv == IntegerMatrix::identity(3));
  CHECK(id.mu == 0);
  CHECK_FALSE(id.singular);

  // triangle adjacency matrix: diagonal {1, 1, 2}
  const HnfDecomposition tri = hermite_decompose(make_closed_chain(3).promise_matrix(Axis::X));
  CHECK(tri.q.at(0, 0) == 1);
  CHECK(tri.q.at(1, 1) == 1);
  CHECK(tri.q.at(2, 2) == 2);
  CHECK(tri.mu == 1);
  CHECK(tri.signed_determinant() == 2);

  const HnfDecomposition odd = hermite_decompose(make_open_chain(5).promise_matrix(Axis::X));
  CHECK(odd.singular);
  bool has_zero = false;
  for (int l = 0; l < 5; ++l) has_zero = has_zero || odd.q.at(l, l) == 0;
  CHECK(has_zero);
}

TEST_CASE("hermite decomposition invariants over the battery") {
  for (const auto& named : strayfield::testing::battery_graphs()) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      const IntegerMatrix a = named.graph.promise_matrix(axis);
      const HnfDecomposition dec = hermite_decompose(a);
      const int n = a.size();

      // p_inv * a = q, exactly
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          long long acc = 0;
          for (int k = 0; k < n; ++k) acc += dec.p_inv.at(r, k) * a.at(k, c);
          CHECK(acc == dec.q.at(r, c));
        }
      }
      // q upper triangular with non-negative diagonal
      for (int r = 0; r < n; ++r) {
        CHECK(dec.q.at(r, r) >= 0);
        for (int c = 0; c < r; ++c) CHECK(dec.q.at(r, c) == 0);
      }
      // p_inv unimodular; diagonal product reproduces the determinant
      CHECK(std::llabs(integer_determinant(dec.p_inv)) == 1);
      CHECK(dec.signed_determinant() == integer_determinant(a));
      CHECK((dec.singular) == (integer_determinant(a) == 0));
    }
  }
}

TEST_CASE("hermite decomposition detects row-operation overflow") {
  IntegerMatrix huge(2);
  huge.at(0, 0) = 1LL << 62;
  huge.at(0, 1) = 1;
  huge.at(1, 0) = 1;
  huge.at(1, 1) = 1LL << 62;
  CHECK_THROWS_AS(hermite_decompose(huge), OverflowError);
}

TEST_CASE("enumeration on the identity system") {
  const HnfDecomposition id = hermite_decompose(IntegerMatrix::identity(3));
  const std::vector<RiemannComplex> w = {{-0.1, 0.0}, {-0.2, kPi}, {-0.3, 0.0}};
  const auto candidates = enumerate_solutions(id, w);
  REQUIRE(candidates.size() == 1);
  for (int l = 0; l < 3; ++l) CHECK(riemann_close(candidates[0].v[l], w[l], 1e-15));
}

TEST_CASE("triangle x-field enumeration, worked example") {
  const Graph triangle = make_closed_chain(3);
  const std::vector<double> beta = {0.9, 0.8, 0.7};
  const std::vector<double> dp = delta_p_promise_all(Axis::X, beta, triangle).values;
  CHECK(dp[0] == doctest::Approx(0.56));
  CHECK(dp[1] == doctest::Approx(0.63));
  CHECK(dp[2] == doctest::Approx(0.72));

  const HnfDecomposition dec = hermite_decompose(triangle.promise_matrix(Axis::X));
  auto candidates = enumerate_solutions(dec, log_vector(dp));
  REQUIRE(candidates.size() == 2);

  filter_real(candidates, 1e-9);
  filter_physical(candidates);
  std::vector<std::vector<double>> betas;
  for (const Candidate& c : candidates) {
    CHECK(c.real);
    CHECK(c.physical);
    betas.push_back(c.beta);
  }
  // the two real solutions are the truth and its global sign flip
  std::sort(betas.begin(), betas.end());
  CHECK(betas[0][0] == doctest::Approx(-0.9).epsilon(1e-12));
  CHECK(betas[0][1] == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(betas[0][2] == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(betas[1][0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(betas[1][1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(betas[1][2] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("enumeration agrees with the plain-complex route") {
  Rng rng(31);
  for (const Graph& g : {make_closed_chain(3), make_closed_chain(5), make_open_chain(4),
                         make_steane5plus1(), make_ghz_complete(4)}) {
    for (Axis axis : {Axis::X, Axis::Y}) {
      const IntegerMatrix a = g.promise_matrix(axis);
      if (integer_determinant(a) == 0) continue;
      std::vector<double> dr(static_cast<std::size_t>(g.vertex_count()));
      for (double& x : dr) x = rng.uniform(-0.95, 0.95);
      for (double& x : dr) {
        if (std::abs(x) < 0.05) x = 0.05;  // keep logs well-defined
      }
      const std::vector<RiemannComplex> w = log_vector(dr);
      const HnfDecomposition dec = hermite_decompose(a);
      const auto lib = enumerate_solutions(dec, w);
      const auto plain = enumerate_plain_complex(dec, w);
      REQUIRE(lib.size() == plain.size());

      // every library candidate matches exactly one plain-route solution
      // modulo 2 pi in the imaginary parts
      for (const Candidate& cand : lib) {
        int matches = 0;
        for (const auto& sol : plain) {
          bool same = true;
          for (int l = 0; l < g.vertex_count() && same; ++l) {
            same = std::abs(cand.v[l].re - sol[l].real()) < 1e-9 &&
                   riemann_im_distance(cand.v[l].im, sol[l].imag()) < 1e-9;
          }
          matches += same ? 1 : 0;
        }
        CHECK(matches == 1);
      }
    }
  }
}

TEST_CASE("every candidate solves the system on the Riemann surface") {
  Rng rng(57);
  const Graph g = make_closed_chain(5);
  const IntegerMatrix a = g.promise_matrix(Axis::X);
  const HnfDecomposition dec = hermite_decompose(a);
  std::vector<double> dr(5);
  for (double& x : dr) x = rng.uniform(0.1, 0.95) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
  const std::vector<RiemannComplex> w = log_vector(dr);
  for (const Candidate& cand : enumerate_solutions(dec, w)) {
    for (int r = 0; r < 5; ++r) {
      double re = 0.0, im = 0.0;
      for (int c = 0; c < 5; ++c) {
        re += static_cast<double>(a.at(r, c)) * cand.v[c].re;
        im += static_cast<double>(a.at(r, c)) * cand.v[c].im;
      }
      CHECK(std::abs(re - w[r].re) < 1e-9);
      CHECK(riemann_im_distance(im, w[r].im) < 1e-9);
    }
  }
}

TEST_CASE("real and physical filters") {
  // synthetic candidate with im = pi/2 is rejected
  Candidate mid;
  mid.branch = {0};
  mid.v = {{-0.5, kPi / 2.0}};
  std::vector<Candidate> cands = {mid};
  CHECK(filter_real(cands, kPi / 8.0) == 0);
  CHECK_FALSE(cands[0].real);

  // candidate with positive real part fails the physicality cut
  Candidate hot;
  hot.branch = {0};
  hot.v = {{0.5, 0.0}};
  std::vector<Candidate> cands2 = {hot};
  CHECK(filter_real(cands2, 1e-9) == 1);
  CHECK(filter_physical(cands2) == 0);

  // noiseless triangle data: survivors are stable under the tolerance
  const Graph triangle = make_closed_chain(3);
  const auto dp = delta_p_promise_all(Axis::X, {0.9, 0.8, 0.7}, triangle).values;
  const HnfDecomposition dec = hermite_decompose(triangle.promise_matrix(Axis::X));
  auto tight = enumerate_solutions(dec, log_vector(dp));
  auto loose = enumerate_solutions(dec, log_vector(dp));
  CHECK(filter_real(tight, 1e-9) == 2);
  CHECK(filter_real(loose, kPi / 4.0) == 2);
}

TEST_CASE("full reconstruction pipeline") {
  // z-field: the estimate is the rate vector itself
  const Graph chain = make_open_chain(4);
  const std::vector<double> dr = {0.9, -0.5, 0.25, 0.7};
  const ReconstructionResult z = reconstruct_fields(chain, Axis::Z, dr);
  REQUIRE(z.candidates.size() == 1);
  REQUIRE(z.chosen.has_value());
  for (int i = 0; i < 4; ++i) {
    CHECK(z.candidates[0].beta[i] == doctest::Approx(dr[i]).epsilon(1e-12));
  }

  // open 3-chain, y-field: unique physical candidate equals the truth
  const Graph c3 = make_open_chain(3);
  const std::vector<double> beta = {0.9, 0.8, 0.7};
  const auto dp = delta_p_promise_all(Axis::Y, beta, c3).values;
  const ReconstructionResult y = reconstruct_fields(c3, Axis::Y, dp);
  CHECK(y.det == -1);
  REQUIRE(y.physical_indices.size() == 1);
  const Candidate& unique = y.candidates[static_cast<std::size_t>(y.physical_indices[0])];
  for (int i = 0; i < 3; ++i) CHECK(unique.beta[i] == doctest::Approx(beta[i]).epsilon(1e-9));

  // singular system and degenerate rates raise
  CHECK_THROWS_AS(reconstruct_fields(make_open_chain(5), Axis::X, {0.5, 0.5, 0.5, 0.5, 0.5}),
                  SingularSystemError);
  CHECK_THROWS_AS(reconstruct_fields(chain, Axis::Z, {0.5, 0.0, 0.5, 0.5}), DegenerateRateError);

  // the clamp keeps zero rates usable
  ReconstructionPipeline pipeline(chain, Axis::Z);
  ReconstructOptions opt;
  opt.clamp_rates = 0.005;
  opt.strict = false;
  const ReconstructionResult clamped = pipeline.run({0.5, 0.0, -0.001, 0.5}, opt);
  REQUIRE(clamped.chosen.has_value());
  CHECK(clamped.candidates[0].beta[1] == doctest::Approx(0.005));
  CHECK(clamped.candidates[0].beta[2] == doctest::Approx(-0.005));
}

TEST_CASE("round-trip over a battery slice") {
  Rng rng(61);
  int combos = 0;
  for (const auto& combo : strayfield::testing::nonsingular_battery()) {
    if (combo.graph.vertex_count() > 9) continue;
    ++combos;
    const int n = combo.graph.vertex_count();
    std::vector<double> beta(static_cast<std::size_t>(n));
    for (double& b : beta) b = rng.uniform(0.2, 0.95);
    const auto dp = delta_p_promise_all(combo.axis, beta, combo.graph).values;
    const ReconstructionResult result = reconstruct_fields(combo.graph, combo.axis, dp);

    CHECK(static_cast<long long>(result.candidates.size()) == std::llabs(combo.det));
    bool found = false;
    for (int idx : result.physical_indices) {
      const Candidate& cand = result.candidates[static_cast<std::size_t>(idx)];
      bool close = true;
      for (int i = 0; i < n && close; ++i) close = std::abs(cand.beta[i] - beta[i]) < 1e-9;
      found = found || close;
    }
    CHECK(found);
  }
  CHECK(combos > 50);
}

TEST_CASE("x-field solutions on odd closed chains pair up under sign flips") {
  Rng rng(71);
  for (int m : {3, 5, 7, 9}) {
    const Graph g = make_closed_chain(m);
    std::vector<double> beta(static_cast<std::size_t>(m));
    for (double& b : beta) b = rng.uniform(0.3, 0.95);
    const auto dp = delta_p_promise_all(Axis::X, beta, g).values;
    const ReconstructionResult result = reconstruct_fields(g, Axis::X, dp);
    REQUIRE(result.physical_indices.size() == 2);
    const auto& first = result.candidates[static_cast<std::size_t>(result.physical_indices[0])];
    const auto& second = result.candidates[static_cast<std::size_t>(result.physical_indices[1])];
    for (int i = 0; i < m; ++i) {
      CHECK(first.beta[i] == doctest::Approx(-second.beta[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("reconstruction error metric") {
  CHECK(reconstruction_error(kPi / 3.0, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(reconstruction_error(0.0, 1.2) == 0.0);   // clipped to +1
  CHECK(reconstruction_error(kPi / 2.0, -0.1) == doctest::Approx(0.1));
  CHECK(reconstruction_error(0.0, -1.5) == 2.0);  // clipped to -1
}

TEST_CASE("reconstruction result serialization") {
  const Graph triangle = make_closed_chain(3);
  const auto dp = delta_p_promise_all(Axis::X, {0.9, 0.8, 0.7}, triangle).values;
  const ReconstructionResult result = reconstruct_fields(triangle, Axis::X, dp);
  const nlohmann::json j = reconstruction_to_json(result);
  CHECK(j["det"] == 2);
  CHECK(j["mu"] == 1);
  CHECK(j["candidates"].size() == 2);
  CHECK(j["candidates"][0].contains("c"));
  CHECK(j["candidates"][0].contains("beta"));
  CHECK_FALSE(j["chosen"].is_null());
}
