#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "strayfield/graph.hpp"

namespace strayfield {

// A point of the Riemann surface C/2pi*i: the imaginary part is stored
// canonically in [0, 2pi) and equality is understood modulo 2pi.
struct RiemannComplex {
  double re = 0.0;
  double im = 0.0;
};

// Folds an imaginary part into [0, 2pi).
double riemann_canonical_im(double im);

// Distance between imaginary parts on the circle of circumference 2pi.
double riemann_im_distance(double im_a, double im_b);

// Logarithm of a nonzero real in [-1, 1]: (ln|x|, 0) for x > 0,
// (ln|x|, pi) for x < 0. Throws DegenerateRateError for x = 0.
RiemannComplex riemann_log(double x);

// Division by a nonzero integer on C/2pi*i has |m| valid results:
// z/m + 2*k*pi*i/m for k = 0 .. |m|-1, each canonicalized.
std::vector<RiemannComplex> riemann_div(const RiemannComplex& z, long long m);

// Upper-triangularization of an integer matrix by elementary row operations
// only (negation, swap, adding integer multiples of another row):
// p_inv * a = q with p_inv unimodular and q upper triangular, diagonal
// normalized non-negative. mu counts the even diagonal entries of q.
struct HnfDecomposition {
  IntegerMatrix q;
  IntegerMatrix p_inv;
  int mu = 0;
  bool singular = false;  // some q diagonal entry is zero
  int p_inv_det = 1;      // +-1, tracked across swaps and negations

  long long diagonal_product_abs() const;
  // det(a) = p_inv_det * prod(q_ll); zero when singular.
  long long signed_determinant() const;
};

HnfDecomposition hermite_decompose(const IntegerMatrix& a);

// One enumerated solution of A_s v = w on the Riemann surface.
struct Candidate {
  std::vector<int> branch;         // index tuple (c_1 .. c_N), c_l < |Q_ll|
  std::vector<RiemannComplex> v;   // raw solution, im canonical in [0, 2pi)
  std::vector<double> snapped_im;  // after the real filter: 0 or pi per entry
  std::vector<double> beta;        // exp(re) with sign from snapped im
  bool real = false;
  bool physical = false;
};

struct ReconstructionResult {
  long long det = 0;
  int mu = 0;
  std::vector<Candidate> candidates;  // lexicographic in branch indices
  std::vector<int> real_indices;
  std::vector<int> physical_indices;
  std::optional<int> chosen;  // index into candidates
};

nlohmann::json reconstruction_to_json(const ReconstructionResult& r);

// Enumerates all |det A_s| solutions of A_s v = w by back-substitution on
// the triangularized system, branching with riemann_div at every pivot.
// Throws SingularSystemError when some pivot is zero.
std::vector<Candidate> enumerate_solutions(const HnfDecomposition& dec,
                                           const std::vector<RiemannComplex>& w);

// Marks candidates whose imaginary parts all lie within tol of {0, pi}
// (mod 2pi), snapping to the nearest lattice point. Returns survivor count.
int filter_real(std::vector<Candidate>& candidates, double tol);

// Marks real candidates with every Re(v_l) <= 0, i.e. |beta_l| <= 1,
// and fills in the reconstructed beta values. Returns survivor count.
int filter_physical(std::vector<Candidate>& candidates);

// Per-vertex reconstruction error |cos(lambda) - clip(beta, -1, +1)|.
double reconstruction_error(double true_lambda, double beta_estimate);

struct ReconstructOptions {
  double real_tol = 1e-9;    // width of the {0, pi} acceptance band
  double clamp_rates = 0.0;  // replace |dr| < clamp by sign-preserving clamp; 0 = off
  // When false, an empty real/physical set falls back to the best snapped
  // candidate instead of throwing EmptyCandidateSetError.
  bool strict = true;
};

// Default real-filter tolerance for sampled (noisy) rates.
inline constexpr double kSampledRealTol = 0.39269908169872414;  // pi/8

// Precomputes A_s and its triangularization for a (graph, axis) pair so
// repeated reconstructions only pay for enumeration.
class ReconstructionPipeline {
 public:
  ReconstructionPipeline(const Graph& g, Axis axis);

  const IntegerMatrix& system_matrix() const { return a_s_; }
  const HnfDecomposition& decomposition() const { return dec_; }
  long long determinant() const { return det_; }
  bool singular() const { return dec_.singular; }

  // Full pipeline: log -> enumerate -> real filter -> physical filter ->
  // exponentiation; `chosen` minimizes the post-snap residual, ties broken
  // by branch order. Throws SingularSystemError / DegenerateRateError /
  // EmptyCandidateSetError (the latter only in strict mode).
  ReconstructionResult run(const std::vector<double>& delta_r,
                           const ReconstructOptions& options = {}) const;

 private:
  IntegerMatrix a_s_;
  HnfDecomposition dec_;
  long long det_ = 0;
};

// One-shot convenience wrapper around ReconstructionPipeline::run.
ReconstructionResult reconstruct_fields(const Graph& g, Axis axis,
                                        const std::vector<double>& delta_r,
                                        double tol = 1e-9);

}  // namespace strayfield
