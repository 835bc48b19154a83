#pragma once

#include <vector>

#include "json.hpp"
#include "strayfield/graph.hpp"

namespace strayfield {

enum class ChainKind { Open, Closed };
enum class GhzKind { Complete, Star };

// Closed-form determinant of the promise matrix of an open/closed chain of
// size m. The X/Y cases follow the mod-4 / mod-6 case tables, including the
// m = 1, 2 special cases of closed chains; Z always gives 1.
long long chain_determinant(ChainKind kind, Axis axis, int m);

// Closed-form determinant for GHZ graphs: fully-connected ("complete") or
// star representation. Valid for every N >= 1 (the N = 2 star case, where
// both representations coincide, returns -1).
long long ghz_determinant(GhzKind kind, Axis axis, int n);

// Modified cosine absorbing the m = 1, 2 special cases of circulant bands:
// 0 for m = 1, -cos(theta)/2 for m = 2, cos(theta) for m >= 3.
double tilde_cos(int m, double theta);

// All prod(m_r) eigenvalues of the promise matrix of a cubic lattice whose
// first `closed_count` dimensions are closed and the rest open. Axis Y
// shifts every eigenvalue by +1; axis Z returns all ones.
std::vector<double> lattice_eigenvalues(const std::vector<int>& sizes, int closed_count, Axis axis);

// True when some closed-form eigenvalue vanishes (|lambda| < 1e-9).
bool lattice_is_singular(const std::vector<int>& sizes, int closed_count, Axis axis);

// Exact integer determinant via fraction-free (Bareiss) elimination.
// Throws OverflowError if an intermediate minor exceeds 128 bits.
long long integer_determinant(const IntegerMatrix& m);

// Exact rank via fraction-free elimination with full pivoting.
int integer_rank(const IntegerMatrix& m);

struct SolvabilityReport {
  Axis axis = Axis::X;
  long long determinant = 0;
  int rank_defect = 0;
  long long predicted_complex_solutions = 0;  // |det|
  bool has_duplicate_neighborhoods = false;   // X-axis quick singularity test
  int even_diag_count_mu = 0;                 // from the HNF diagonal
  long long predicted_real_solutions = 0;     // 2^mu; meaningless when singular
};

SolvabilityReport solvability_report(const Graph& g, Axis axis);
nlohmann::json solvability_to_json(const SolvabilityReport& report);

}  // namespace strayfield
