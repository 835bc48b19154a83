#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "strayfield/graph.hpp"

namespace strayfield {

enum class NormKind { One, Two, Inf };

Eigen::MatrixXd to_dense(const IntegerMatrix& m);

// Mean and variance of the rate-difference estimator over M rounds:
// (dp, (1 - dp^2) / M).
std::pair<double, double> rate_moments(double dp, long long rounds);

// Large-M variance of the log-rate estimator, Var[dR] / |E[dR]|, taken
// as printed in the source analysis (first power in the denominator; the
// Monte Carlo test quantifies the quality of the approximation).
double log_variance(double dp, long long rounds);

// Push a covariance through the linear solve: A^{-1} Sigma A^{-T}.
Eigen::MatrixXd propagate_covariance(const IntegerMatrix& a_s, const Eigen::MatrixXd& sigma);

// Relative perturbation bound kappa(A) * |dw|/|w| in the chosen norm.
double condition_bound(const IntegerMatrix& a_s, double dw_rel, NormKind norm);

// sqrt(det Sigma); throws NumericalError when the determinant is negative
// beyond tolerance.
double uncertainty_volume(const Eigen::MatrixXd& sigma);

// A^{-1} 1: per-vertex response to a uniform depolarizing offset of the
// log rates. Entries with |.| < 1e-9 mark depolarizing-resilient vertices.
struct DepolarizingSensitivity {
  std::vector<double> values;           // values[a-1] for vertex a
  std::vector<int> resilient_vertices;  // 1-based, ascending
};
DepolarizingSensitivity depolarizing_sensitivity(const IntegerMatrix& a_s);

// Principal branch W0 on [-1/e, inf); Halley iteration to |x e^x - z| < 1e-12.
double lambert_w0(double z);
// Lower branch W-1 on [-1/e, 0).
double lambert_w_minus1(double z);

struct PerturbationBoundInput {
  double r = 0.0;          // lower bound on |v|_inf
  double upper = 0.0;      // upper bound R on |v|_inf
  double epsilon = 0.0;    // misalignment scale
  int max_degree = 0;      // d
  double ainv_norm = 0.0;  // |A_s^{-1}|_inf
  double dw_norm = 0.0;    // |delta w|_inf
};

struct PerturbationBoundResult {
  double r0 = 0.0;  // r - |A^{-1}| |dw|
  double R0 = 0.0;  // R + |A^{-1}| |dw|
  double C = 0.0;   // (|A^{-1}| / r0) * 2 eps (d+1)
  bool applicable = false;    // r0 > 0
  bool condition_ok = false;  // the W-argument stays above the branch point
  std::optional<double> R_inf;      // R0 - W0(-C R0 e^{R0})
  std::optional<double> R_inf_alt;  // same with W-1: the second real branch
};

// Self-consistent bound on the norm of the perturbed solution; closed form
// via Lambert W, matching the fixpoint of R <- R0 (1 + C e^R).
PerturbationBoundResult perturbation_bound(const PerturbationBoundInput& input);

// |A^{-1}|_inf of an integer matrix (dense solve; throws SingularSystemError).
double inverse_inf_norm(const IntegerMatrix& a_s);

}  // namespace strayfield
