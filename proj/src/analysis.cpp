#include "strayfield/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "strayfield/errors.hpp"

namespace strayfield {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kResilienceTol = 1e-9;
constexpr double kWResidualTol = 1e-12;
const double kInvE = std::exp(-1.0);

Eigen::PartialPivLU<Eigen::MatrixXd> checked_lu(const IntegerMatrix& a_s) {
  const Eigen::MatrixXd a = to_dense(a_s);
  Eigen::FullPivLU<Eigen::MatrixXd> probe(a);
  probe.setThreshold(kSingularTol);
  if (!probe.isInvertible()) throw SingularSystemError("promise matrix is singular");
  return Eigen::PartialPivLU<Eigen::MatrixXd>(a);
}

double halley_refine(double x, double z) {
  for (int it = 0; it < 200; ++it) {
    const double ex = std::exp(x);
    const double f = x * ex - z;
    if (std::abs(f) < kWResidualTol) return x;
    const double fp = ex * (1.0 + x);
    const double fpp = ex * (2.0 + x);
    const double denom = fp - f * fpp / (2.0 * fp);
    x -= f / denom;
  }
  if (std::abs(x * std::exp(x) - z) > 1e-10) {
    throw NumericalError("Lambert W iteration did not converge");
  }
  return x;
}

}  // namespace

Eigen::MatrixXd to_dense(const IntegerMatrix& m) {
  Eigen::MatrixXd a(m.size(), m.size());
  for (int r = 0; r < m.size(); ++r)
    for (int c = 0; c < m.size(); ++c) a(r, c) = static_cast<double>(m.at(r, c));
  return a;
}

std::pair<double, double> rate_moments(double dp, long long rounds) {
  if (rounds < 1) throw std::invalid_argument("round count must be >= 1");
  if (dp < -1.0 || dp > 1.0) throw std::invalid_argument("dp outside [-1, 1]");
  return {dp, (1.0 - dp * dp) / static_cast<double>(rounds)};
}

double log_variance(double dp, long long rounds) {
  if (dp == 0.0) throw DegenerateRateError("log variance undefined at dp = 0");
  return rate_moments(dp, rounds).second / std::abs(dp);
}

Eigen::MatrixXd propagate_covariance(const IntegerMatrix& a_s, const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != a_s.size() || sigma.cols() != a_s.size()) {
    throw std::invalid_argument("covariance size does not match matrix");
  }
  auto lu = checked_lu(a_s);
  // A^{-1} Sigma A^{-T}
  const Eigen::MatrixXd left = lu.solve(sigma);
  return lu.solve(left.transpose()).transpose();
}

double condition_bound(const IntegerMatrix& a_s, double dw_rel, NormKind norm) {
  if (dw_rel < 0.0) throw std::invalid_argument("relative perturbation must be >= 0");
  const Eigen::MatrixXd a = to_dense(a_s);
  auto lu = checked_lu(a_s);
  const Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  double kappa = 0.0;
  switch (norm) {
    case NormKind::One:
      kappa = a.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
      break;
    case NormKind::Inf:
      kappa = a.cwiseAbs().rowwise().sum().maxCoeff() * inv.cwiseAbs().rowwise().sum().maxCoeff();
      break;
    case NormKind::Two: {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
      kappa = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
      break;
    }
  }
  return kappa * dw_rel;
}

double uncertainty_volume(const Eigen::MatrixXd& sigma) {
  const double det = sigma.determinant();
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (det < -1e-9 * std::pow(scale, sigma.rows())) {
    throw NumericalError("covariance determinant is negative");
  }
  return std::sqrt(std::max(0.0, det));
}

DepolarizingSensitivity depolarizing_sensitivity(const IntegerMatrix& a_s) {
  auto lu = checked_lu(a_s);
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(a_s.size()));
  DepolarizingSensitivity result;
  result.values.resize(static_cast<std::size_t>(a_s.size()));
  for (int i = 0; i < a_s.size(); ++i) {
    result.values[static_cast<std::size_t>(i)] = x(i);
    if (std::abs(x(i)) < kResilienceTol) result.resilient_vertices.push_back(i + 1);
  }
  return result;
}

double lambert_w0(double z) {
  if (z < -kInvE - 1e-14) throw std::invalid_argument("W0 undefined below -1/e");
  if (z == 0.0) return 0.0;
  double x;
  if (z < -kInvE + 1e-3) {
    // branch-point expansion around z = -1/e
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * z + 1.0)));
    x = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  } else if (z < 3.0) {
    x = std::log1p(std::max(z, -0.99));  // mid-range seed, W0(z) ~ ln(1+z)
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    x = l1 - l2 + l2 / l1;
  }
  const double w = halley_refine(x, std::max(z, -kInvE));
  if (w < -1.0 - 1e-9) throw NumericalError("Lambert W0 left its branch");
  return w;
}

double lambert_w_minus1(double z) {
  if (z < -kInvE - 1e-14 || z >= 0.0) {
    throw std::invalid_argument("W-1 is real only on [-1/e, 0)");
  }
  double x;
  if (z < -kInvE + 1e-3) {
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * z + 1.0)));
    x = -1.0 - p - p * p / 3.0 - 11.0 * p * p * p / 72.0;
  } else {
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    x = l1 - l2 + l2 / l1;
  }
  const double w = halley_refine(x, std::max(z, -kInvE));
  if (w > -1.0 + 1e-9) throw NumericalError("Lambert W-1 left its branch");
  return w;
}

PerturbationBoundResult perturbation_bound(const PerturbationBoundInput& input) {
  if (input.r <= 0.0 || input.upper < input.r) {
    throw std::invalid_argument("need 0 < r <= R");
  }
  if (input.epsilon < 0.0 || input.ainv_norm < 0.0 || input.dw_norm < 0.0) {
    throw std::invalid_argument("norms and epsilon must be non-negative");
  }
  PerturbationBoundResult out;
  const double shift = input.ainv_norm * input.dw_norm;
  out.r0 = input.r - shift;
  out.R0 = input.upper + shift;
  out.applicable = out.r0 > 0.0;
  if (!out.applicable) return out;

  out.C = (input.ainv_norm / out.r0) * 2.0 * input.epsilon * (input.max_degree + 1);
  if (out.C == 0.0) {
    // no misalignment: the fixpoint sits at R0 itself
    out.condition_ok = true;
    out.R_inf = out.R0;
    return out;
  }
  // The fixpoint R = R0 (1 + C e^R) has a real solution iff the W-argument
  // z = -C R0 e^{R0} stays above the branch point -1/e; this is the printed
  // condition R0 < W(r0 / (|A^{-1}| 2 eps (d+1) e)) in disguise.
  const double z = -out.C * out.R0 * std::exp(out.R0);
  out.condition_ok = z >= -kInvE;
  if (!out.condition_ok) return out;
  out.R_inf = out.R0 - lambert_w0(z);
  if (z < 0.0) out.R_inf_alt = out.R0 - lambert_w_minus1(z);
  return out;
}

double inverse_inf_norm(const IntegerMatrix& a_s) {
  auto lu = checked_lu(a_s);
  const Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(a_s.size(), a_s.size()));
  return inv.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace strayfield
