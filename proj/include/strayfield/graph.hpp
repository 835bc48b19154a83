#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace strayfield {

// Promise axis: the Cartesian direction the stray field is assumed to be
// aligned with. Selects the system matrix A_s of the reconstruction.
enum class Axis { X, Y, Z };

Axis axis_from_string(const std::string& s);
const char* axis_name(Axis axis);

// Dense square matrix with exact integer entries (no floating point).
class IntegerMatrix {
 public:
  explicit IntegerMatrix(int n);
  static IntegerMatrix identity(int n);

  int size() const { return n_; }
  long long& at(int r, int c) { return data_[index(r, c)]; }
  long long at(int r, int c) const { return data_[index(r, c)]; }

  IntegerMatrix plus_identity() const;
  bool is_symmetric() const;
  bool has_equal_rows() const;

  bool operator==(const IntegerMatrix&) const = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c);
  }

  int n_ = 0;
  std::vector<long long> data_;
};

// Undirected simple graph on vertices {1, ..., n}. Immutable once built;
// edges are stored normalized (a < b) and deduplicated.
class Graph {
 public:
  // Validates the edge list: endpoints in [1, n], no self-loops, n >= 1.
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int vertex_count() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // Neighbourhood of vertex a (1-based), sorted ascending.
  const std::vector<int>& neighbors(int a) const;
  // Closed neighbourhood: neighbors plus a itself, sorted.
  std::vector<int> closed_neighborhood(int a) const;

  int degree(int a) const { return static_cast<int>(neighbors(a).size()); }
  int max_degree() const;
  bool has_isolated_vertex() const;

  IntegerMatrix adjacency_matrix() const;
  // A_z = identity, A_x = A, A_y = A + identity.
  IntegerMatrix promise_matrix(Axis axis) const;

  bool operator==(const Graph&) const = default;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;  // adjacency_[a-1] = sorted neighbor ids
};

enum class Boundary { Open, Closed };

Graph make_open_chain(int m);
Graph make_closed_chain(int m);
// Cubic lattice with per-dimension sizes and boundary conditions. Vertices
// are numbered scan-line style: (j_1, ..., j_d) -> 1 + sum (j_r - 1) * prod_{r'>r} m_r'.
// A closed dimension of size m wraps only for m >= 3 (m = 2 would duplicate
// the existing edge, m = 1 would be a self-loop; both are dropped).
Graph make_lattice(const std::vector<int>& sizes, const std::vector<Boundary>& boundary);
Graph make_ghz_complete(int n);
Graph make_ghz_star(int n);
// Closed 5-chain plus a sixth vertex joined to all five.
Graph make_steane5plus1();

// Parses generator spec strings used on the command line, e.g.
//   "open_chain:7"  "closed_chain:5"  "lattice:4x5:open,closed"
//   "ghz_complete:4"  "ghz_star:6"  "steane5plus1"
Graph make_graph_from_spec(const std::string& spec);

// JSON schema: {"n": int, "edges": [[a, b], ...]} with 1-based vertices.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

}  // namespace strayfield
