#include "strayfield/spectra.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "strayfield/errors.hpp"
#include "strayfield/reconstruct.hpp"

namespace strayfield {

namespace {

using int128 = __int128;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kZeroEigenvalueTol = 1e-9;

int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer elimination overflow");
  return r;
}

int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer elimination overflow");
  return r;
}

long long narrow(int128 v) {
  if (v > int128(9223372036854775807LL) || v < -int128(9223372036854775807LL) - 1) {
    throw OverflowError("determinant does not fit in 64 bits");
  }
  return static_cast<long long>(v);
}

}  // namespace

long long chain_determinant(ChainKind kind, Axis axis, int m) {
  if (m < 1) throw std::invalid_argument("chain size must be >= 1");
  if (axis == Axis::Z) return 1;

  if (kind == ChainKind::Open) {
    if (axis == Axis::X) {
      if (m % 2 == 1) return 0;
      return (m % 4 == 0) ? 1 : -1;
    }
    // Y: period 6
    switch (m % 6) {
      case 0: case 1: return 1;
      case 2: case 5: return 0;
      default: return -1;  // 3, 4
    }
  }

  // closed chain; m = 1, 2 are special
  if (axis == Axis::X) {
    if (m == 1) return 0;
    if (m == 2) return -1;
    if (m % 2 == 1) return 2;
    return (m % 4 == 0) ? 0 : -4;
  }
  if (m == 1) return 1;
  if (m == 2) return 0;
  // Note: the mod-6 sign cases follow the exact integer determinants of the
  // generated circulant matrices (prod_k (1 + 2 cos(2 pi k / m)) works out
  // to +3 for m = 1, 5 mod 6 and -3 for m = 2, 4 mod 6).
  switch (m % 6) {
    case 0: case 3: return 0;
    case 2: case 4: return -3;
    default: return 3;  // 1, 5
  }
}

long long ghz_determinant(GhzKind kind, Axis axis, int n) {
  if (n < 1) throw std::invalid_argument("GHZ size must be >= 1");
  if (axis == Axis::Z) return 1;
  if (kind == GhzKind::Complete) {
    if (axis == Axis::X) return (n % 2 == 1 ? 1 : -1) * static_cast<long long>(n - 1);
    return n == 1 ? 1 : 0;
  }
  if (axis == Axis::X) return n == 2 ? -1 : 0;
  return 2 - static_cast<long long>(n);
}

double tilde_cos(int m, double theta) {
  if (m < 1) throw std::invalid_argument("tilde_cos needs m >= 1");
  if (m == 1) return 0.0;
  if (m == 2) return -std::cos(theta) / 2.0;
  return std::cos(theta);
}

std::vector<double> lattice_eigenvalues(const std::vector<int>& sizes, int closed_count, Axis axis) {
  const int d = static_cast<int>(sizes.size());
  if (d == 0) throw std::invalid_argument("lattice needs at least one dimension");
  if (closed_count < 0 || closed_count > d) {
    throw std::invalid_argument("closed_count must be in [0, d]");
  }
  long long total = 1;
  for (int m : sizes) {
    if (m < 1) throw std::invalid_argument("lattice sizes must be >= 1");
    total *= m;
  }

  std::vector<double> eigenvalues;
  eigenvalues.reserve(static_cast<std::size_t>(total));
  if (axis == Axis::Z) {
    eigenvalues.assign(static_cast<std::size_t>(total), 1.0);
    return eigenvalues;
  }

  const double shift = (axis == Axis::Y) ? 1.0 : 0.0;
  std::vector<int> k(d, 1);
  for (long long i = 0; i < total; ++i) {
    double lambda = shift;
    for (int r = 0; r < d; ++r) {
      if (r < closed_count) {
        lambda += 2.0 * tilde_cos(sizes[r], 2.0 * kPi * k[r] / sizes[r]);
      } else {
        lambda += 2.0 * std::cos(kPi * k[r] / (sizes[r] + 1));
      }
    }
    eigenvalues.push_back(lambda);
    for (int r = d - 1; r >= 0; --r) {
      if (++k[r] <= sizes[r]) break;
      k[r] = 1;
    }
  }
  return eigenvalues;
}

bool lattice_is_singular(const std::vector<int>& sizes, int closed_count, Axis axis) {
  for (double lambda : lattice_eigenvalues(sizes, closed_count, axis)) {
    if (std::abs(lambda) < kZeroEigenvalueTol) return true;
  }
  return false;
}

long long integer_determinant(const IntegerMatrix& m) {
  const int n = m.size();
  std::vector<int128> w(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) w[static_cast<std::size_t>(r) * n + c] = m.at(r, c);
  auto at = [&](int r, int c) -> int128& { return w[static_cast<std::size_t>(r) * n + c]; };

  // Bareiss fraction-free elimination: every intermediate entry is an exact
  // minor of the input, and the division below is always exact.
  int sign = 1;
  int128 prev = 1;
  for (int l = 0; l < n - 1; ++l) {
    if (at(l, l) == 0) {
      int pivot = -1;
      for (int r = l + 1; r < n && pivot < 0; ++r)
        if (at(r, l) != 0) pivot = r;
      if (pivot < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(at(l, c), at(pivot, c));
      sign = -sign;
    }
    for (int r = l + 1; r < n; ++r) {
      for (int c = l + 1; c < n; ++c) {
        const int128 num = checked_sub(checked_mul(at(r, c), at(l, l)), checked_mul(at(r, l), at(l, c)));
        at(r, c) = num / prev;
      }
      at(r, l) = 0;
    }
    prev = at(l, l);
  }
  return narrow(sign * at(n - 1, n - 1));
}

int integer_rank(const IntegerMatrix& m) {
  const int n = m.size();
  std::vector<int128> w(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) w[static_cast<std::size_t>(r) * n + c] = m.at(r, c);
  auto at = [&](int r, int c) -> int128& { return w[static_cast<std::size_t>(r) * n + c]; };

  // Bareiss with full pivoting; rank = number of nonzero pivots.
  int rank = 0;
  int128 prev = 1;
  for (int l = 0; l < n; ++l) {
    int pr = -1, pc = -1;
    for (int r = l; r < n && pr < 0; ++r)
      for (int c = l; c < n; ++c)
        if (at(r, c) != 0) {
          pr = r;
          pc = c;
          break;
        }
    if (pr < 0) break;
    if (pr != l)
      for (int c = 0; c < n; ++c) std::swap(at(l, c), at(pr, c));
    if (pc != l)
      for (int r = 0; r < n; ++r) std::swap(at(r, l), at(r, pc));
    ++rank;
    for (int r = l + 1; r < n; ++r) {
      for (int c = l + 1; c < n; ++c) {
        const int128 num = checked_sub(checked_mul(at(r, c), at(l, l)), checked_mul(at(r, l), at(l, c)));
        at(r, c) = num / prev;
      }
      at(r, l) = 0;
    }
    prev = at(l, l);
  }
  return rank;
}

SolvabilityReport solvability_report(const Graph& g, Axis axis) {
  const IntegerMatrix a_s = g.promise_matrix(axis);
  SolvabilityReport report;
  report.axis = axis;
  report.determinant = integer_determinant(a_s);
  report.rank_defect = a_s.size() - integer_rank(a_s);
  report.predicted_complex_solutions = std::llabs(report.determinant);
  report.has_duplicate_neighborhoods = g.adjacency_matrix().has_equal_rows();

  const HnfDecomposition dec = hermite_decompose(a_s);
  report.even_diag_count_mu = dec.mu;
  report.predicted_real_solutions =
      (report.determinant != 0 && dec.mu < 62) ? (1LL << dec.mu) : 0;
  return report;
}

nlohmann::json solvability_to_json(const SolvabilityReport& r) {
  nlohmann::json j{
      {"axis", axis_name(r.axis)},
      {"det", r.determinant},
      {"rank_defect", r.rank_defect},
      {"predicted_complex_solutions", r.predicted_complex_solutions},
      {"has_duplicate_neighborhoods", r.has_duplicate_neighborhoods},
      {"mu", r.even_diag_count_mu},
  };
  if (r.determinant != 0) {
    j["predicted_real_solutions"] = r.predicted_real_solutions;
  } else {
    j["predicted_real_solutions"] = nullptr;  // undefined for singular systems
  }
  return j;
}

}  // namespace strayfield
