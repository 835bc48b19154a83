#include "strayfield/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "strayfield/errors.hpp"

namespace strayfield {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
// Slack on Re(v) <= 0 so that an exact beta = 1 (Re = 0) survives rounding.
constexpr double kPhysicalSlack = 1e-12;

long long add_ll(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("row operation overflow");
  return r;
}

long long mul_ll(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("row operation overflow");
  return r;
}

}  // namespace

double riemann_canonical_im(double im) {
  double folded = std::fmod(im, kTwoPi);
  if (folded < 0.0) folded += kTwoPi;
  if (folded >= kTwoPi) folded = 0.0;
  return folded;
}

double riemann_im_distance(double im_a, double im_b) {
  const double d = std::abs(riemann_canonical_im(im_a) - riemann_canonical_im(im_b));
  return std::min(d, kTwoPi - d);
}

RiemannComplex riemann_log(double x) {
  if (x == 0.0) throw DegenerateRateError("logarithm of a zero rate difference");
  return {std::log(std::abs(x)), x > 0.0 ? 0.0 : kPi};
}

std::vector<RiemannComplex> riemann_div(const RiemannComplex& z, long long m) {
  if (m == 0) throw std::invalid_argument("division by zero on the Riemann surface");
  const long long branches = std::llabs(m);
  std::vector<RiemannComplex> values;
  values.reserve(static_cast<std::size_t>(branches));
  for (long long k = 0; k < branches; ++k) {
    values.push_back({z.re / static_cast<double>(m),
                      riemann_canonical_im((z.im + kTwoPi * static_cast<double>(k)) /
                                           static_cast<double>(m))});
  }
  return values;
}

long long HnfDecomposition::diagonal_product_abs() const {
  long long product = 1;
  for (int l = 0; l < q.size(); ++l) product = mul_ll(product, std::llabs(q.at(l, l)));
  return product;
}

long long HnfDecomposition::signed_determinant() const {
  if (singular) return 0;
  return p_inv_det * diagonal_product_abs();
}

HnfDecomposition hermite_decompose(const IntegerMatrix& a) {
  const int n = a.size();
  HnfDecomposition dec{a, IntegerMatrix::identity(n)};
  IntegerMatrix& q = dec.q;
  IntegerMatrix& p = dec.p_inv;

  auto swap_rows = [&](int r1, int r2) {
    for (int c = 0; c < n; ++c) {
      std::swap(q.at(r1, c), q.at(r2, c));
      std::swap(p.at(r1, c), p.at(r2, c));
    }
    dec.p_inv_det = -dec.p_inv_det;
  };
  auto negate_row = [&](int r) {
    for (int c = 0; c < n; ++c) {
      q.at(r, c) = -q.at(r, c);
      p.at(r, c) = -p.at(r, c);
    }
    dec.p_inv_det = -dec.p_inv_det;
  };
  auto add_multiple = [&](int target, int source, long long k) {
    for (int c = 0; c < n; ++c) {
      q.at(target, c) = add_ll(q.at(target, c), mul_ll(k, q.at(source, c)));
      p.at(target, c) = add_ll(p.at(target, c), mul_ll(k, p.at(source, c)));
    }
  };

  for (int l = 0; l < n; ++l) {
    // Euclidean sweep on column l. Picking the smallest nonzero pivot keeps
    // the coefficients flat; with only row operations allowed the column
    // can only be cleared once the pivot divides everything below it.
    while (true) {
      int pivot = -1;
      for (int r = l; r < n; ++r) {
        if (q.at(r, l) != 0 && (pivot < 0 || std::llabs(q.at(r, l)) < std::llabs(q.at(pivot, l)))) {
          pivot = r;
        }
      }
      if (pivot < 0) break;  // zero column: q.at(l, l) stays 0
      if (pivot != l) swap_rows(l, pivot);
      bool clean = true;
      for (int r = l + 1; r < n; ++r) {
        if (q.at(r, l) == 0) continue;
        const long long k = q.at(r, l) / q.at(l, l);
        if (k != 0) add_multiple(r, l, -k);
        if (q.at(r, l) != 0) clean = false;
      }
      if (clean) break;
    }
    if (q.at(l, l) < 0) negate_row(l);
    if (q.at(l, l) == 0) dec.singular = true;
    if (q.at(l, l) % 2 == 0) ++dec.mu;
  }
  return dec;
}

namespace {

// Back-substitution over C/2pi*i, depth-first over the branch tree.
void enumerate_recursive(const IntegerMatrix& q, const std::vector<RiemannComplex>& w_prime,
                         int level, std::vector<RiemannComplex>& v, std::vector<int>& branch,
                         std::vector<Candidate>& out) {
  const int n = q.size();
  if (level < 0) {
    Candidate c;
    c.branch = branch;
    c.v = v;
    out.push_back(std::move(c));
    return;
  }
  RiemannComplex residual = w_prime[level];
  for (int j = level + 1; j < n; ++j) {
    const double coeff = static_cast<double>(q.at(level, j));
    residual.re -= coeff * v[j].re;
    residual.im -= coeff * v[j].im;
  }
  residual.im = riemann_canonical_im(residual.im);
  const std::vector<RiemannComplex> options = riemann_div(residual, q.at(level, level));
  for (int k = 0; k < static_cast<int>(options.size()); ++k) {
    v[level] = options[k];
    branch[level] = k;
    enumerate_recursive(q, w_prime, level - 1, v, branch, out);
  }
}

}  // namespace

std::vector<Candidate> enumerate_solutions(const HnfDecomposition& dec,
                                           const std::vector<RiemannComplex>& w) {
  const int n = dec.q.size();
  if (static_cast<int>(w.size()) != n) throw std::invalid_argument("rate vector size mismatch");
  if (dec.singular) throw SingularSystemError("promise matrix is singular");

  // w' = P^{-1} w; integer combinations keep imaginary parts on the pi grid.
  std::vector<RiemannComplex> w_prime(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    double re = 0.0, im = 0.0;
    for (int c = 0; c < n; ++c) {
      const double coeff = static_cast<double>(dec.p_inv.at(r, c));
      re += coeff * w[c].re;
      im += coeff * w[c].im;
    }
    w_prime[r] = {re, riemann_canonical_im(im)};
  }

  std::vector<Candidate> candidates;
  std::vector<RiemannComplex> v(static_cast<std::size_t>(n));
  std::vector<int> branch(static_cast<std::size_t>(n), 0);
  enumerate_recursive(dec.q, w_prime, n - 1, v, branch, candidates);
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.branch < b.branch; });
  return candidates;
}

int filter_real(std::vector<Candidate>& candidates, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("real filter tolerance must be positive");
  int survivors = 0;
  for (Candidate& cand : candidates) {
    cand.real = true;
    cand.snapped_im.assign(cand.v.size(), 0.0);
    for (std::size_t l = 0; l < cand.v.size(); ++l) {
      const double d_zero = riemann_im_distance(cand.v[l].im, 0.0);
      const double d_pi = riemann_im_distance(cand.v[l].im, kPi);
      if (std::min(d_zero, d_pi) > tol) {
        cand.real = false;
        break;
      }
      cand.snapped_im[l] = (d_zero <= d_pi) ? 0.0 : kPi;
    }
    if (!cand.real) cand.snapped_im.clear();
    survivors += cand.real ? 1 : 0;
  }
  return survivors;
}

int filter_physical(std::vector<Candidate>& candidates) {
  int survivors = 0;
  for (Candidate& cand : candidates) {
    if (!cand.real) continue;
    cand.physical = true;
    cand.beta.assign(cand.v.size(), 0.0);
    for (std::size_t l = 0; l < cand.v.size(); ++l) {
      if (cand.v[l].re > kPhysicalSlack) {
        cand.physical = false;
        break;
      }
      const double sign = (cand.snapped_im[l] == 0.0) ? 1.0 : -1.0;
      cand.beta[l] = sign * std::exp(std::min(cand.v[l].re, 0.0));
    }
    if (!cand.physical) cand.beta.clear();
    survivors += cand.physical ? 1 : 0;
  }
  return survivors;
}

double reconstruction_error(double true_lambda, double beta_estimate) {
  const double clipped = std::clamp(beta_estimate, -1.0, 1.0);
  return std::abs(std::cos(true_lambda) - clipped);
}

ReconstructionPipeline::ReconstructionPipeline(const Graph& g, Axis axis)
    : a_s_(g.promise_matrix(axis)), dec_(hermite_decompose(a_s_)), det_(dec_.signed_determinant()) {}

namespace {

double residual_norm(const IntegerMatrix& a_s, const Candidate& cand,
                     const std::vector<RiemannComplex>& w) {
  const int n = a_s.size();
  double norm2 = 0.0;
  for (int r = 0; r < n; ++r) {
    double re = 0.0, im = 0.0;
    for (int c = 0; c < n; ++c) {
      const double coeff = static_cast<double>(a_s.at(r, c));
      re += coeff * cand.v[c].re;
      im += coeff * (cand.snapped_im.empty() ? cand.v[c].im : cand.snapped_im[c]);
    }
    const double dre = re - w[r].re;
    const double dim = riemann_im_distance(im, w[r].im);
    norm2 += dre * dre + dim * dim;
  }
  return norm2;
}

}  // namespace

ReconstructionResult ReconstructionPipeline::run(const std::vector<double>& delta_r,
                                                 const ReconstructOptions& options) const {
  const int n = a_s_.size();
  if (static_cast<int>(delta_r.size()) != n) {
    throw std::invalid_argument("rate vector size does not match graph");
  }
  if (dec_.singular) throw SingularSystemError("promise matrix is singular");

  std::vector<RiemannComplex> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double dr = delta_r[static_cast<std::size_t>(i)];
    if (options.clamp_rates > 0.0 && std::abs(dr) < options.clamp_rates) {
      // Sign-preserving clamp; an exact zero is pushed to +clamp.
      dr = (dr < 0.0) ? -options.clamp_rates : options.clamp_rates;
    }
    w[static_cast<std::size_t>(i)] = riemann_log(dr);
  }

  ReconstructionResult result;
  result.det = det_;
  result.mu = dec_.mu;
  result.candidates = enumerate_solutions(dec_, w);

  int real_count = filter_real(result.candidates, options.real_tol);
  if (real_count == 0) {
    if (options.strict) {
      throw EmptyCandidateSetError("no candidate has imaginary parts on the {0, pi} grid");
    }
    // Relaxed mode: snap everything (pi/2 + slack covers the whole circle).
    real_count = filter_real(result.candidates, kPi / 2.0 + 1e-9);
  }
  int physical_count = filter_physical(result.candidates);
  if (physical_count == 0 && options.strict) {
    throw EmptyCandidateSetError("all real candidates have |beta| > 1");
  }

  for (int i = 0; i < static_cast<int>(result.candidates.size()); ++i) {
    if (result.candidates[static_cast<std::size_t>(i)].real) result.real_indices.push_back(i);
    if (result.candidates[static_cast<std::size_t>(i)].physical) {
      result.physical_indices.push_back(i);
    }
  }

  // Choose among physical candidates when possible, otherwise (relaxed mode)
  // among the snapped real ones; smallest residual wins, candidates are
  // already in branch order so ties resolve lexicographically.
  const std::vector<int>& pool =
      !result.physical_indices.empty() ? result.physical_indices : result.real_indices;
  double best = std::numeric_limits<double>::infinity();
  for (int idx : pool) {
    const double r2 = residual_norm(a_s_, result.candidates[static_cast<std::size_t>(idx)], w);
    if (r2 < best - 1e-15) {
      best = r2;
      result.chosen = idx;
    }
  }
  // Relaxed fallback still needs betas for the chosen candidate even when it
  // failed the physicality cut; clip on use is the caller's contract.
  if (result.chosen && result.candidates[static_cast<std::size_t>(*result.chosen)].beta.empty()) {
    Candidate& cand = result.candidates[static_cast<std::size_t>(*result.chosen)];
    cand.beta.assign(cand.v.size(), 0.0);
    for (std::size_t l = 0; l < cand.v.size(); ++l) {
      const double sign = (cand.snapped_im[l] == 0.0) ? 1.0 : -1.0;
      cand.beta[l] = sign * std::exp(cand.v[l].re);
    }
  }
  return result;
}

ReconstructionResult reconstruct_fields(const Graph& g, Axis axis,
                                        const std::vector<double>& delta_r, double tol) {
  ReconstructionPipeline pipeline(g, axis);
  ReconstructOptions options;
  options.real_tol = tol;
  return pipeline.run(delta_r, options);
}

nlohmann::json reconstruction_to_json(const ReconstructionResult& r) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const Candidate& cand : r.candidates) {
    nlohmann::json v_re = nlohmann::json::array();
    nlohmann::json v_im = nlohmann::json::array();
    for (const RiemannComplex& z : cand.v) {
      v_re.push_back(z.re);
      v_im.push_back(z.im);
    }
    candidates.push_back({{"c", cand.branch},
                          {"v_re", v_re},
                          {"v_im", v_im},
                          {"beta", cand.beta},
                          {"real", cand.real},
                          {"physical", cand.physical}});
  }
  nlohmann::json j{{"det", r.det}, {"mu", r.mu}, {"candidates", candidates}};
  if (r.chosen)
    j["chosen"] = *r.chosen;
  else
    j["chosen"] = nullptr;
  return j;
}

}  // namespace strayfield
