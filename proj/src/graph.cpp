#include "strayfield/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace strayfield {

Axis axis_from_string(const std::string& s) {
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  if (s == "z" || s == "Z") return Axis::Z;
  throw std::invalid_argument("unknown axis '" + s + "' (expected x, y or z)");
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

IntegerMatrix::IntegerMatrix(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("matrix size must be positive");
  data_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

IntegerMatrix IntegerMatrix::identity(int n) {
  IntegerMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::plus_identity() const {
  IntegerMatrix m = *this;
  for (int i = 0; i < n_; ++i) m.at(i, i) += 1;
  return m;
}

bool IntegerMatrix::is_symmetric() const {
  for (int r = 0; r < n_; ++r)
    for (int c = r + 1; c < n_; ++c)
      if (at(r, c) != at(c, r)) return false;
  return true;
}

bool IntegerMatrix::has_equal_rows() const {
  for (int r = 0; r < n_; ++r) {
    for (int s = r + 1; s < n_; ++s) {
      bool equal = true;
      for (int c = 0; c < n_ && equal; ++c) equal = at(r, c) == at(s, c);
      if (equal) return true;
    }
  }
  return false;
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
  if (n <= 0) throw std::invalid_argument("graph must have at least one vertex");
  std::set<std::pair<int, int>> normalized;
  for (auto [a, b] : edges) {
    if (a < 1 || a > n || b < 1 || b > n) {
      throw std::invalid_argument("edge endpoint out of range [1, n]");
    }
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    normalized.insert({std::min(a, b), std::max(a, b)});
  }
  edges_.assign(normalized.begin(), normalized.end());
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (auto [a, b] : edges_) {
    adjacency_[a - 1].push_back(b);
    adjacency_[b - 1].push_back(a);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

const std::vector<int>& Graph::neighbors(int a) const {
  if (a < 1 || a > n_) throw std::invalid_argument("vertex out of range [1, n]");
  return adjacency_[a - 1];
}

std::vector<int> Graph::closed_neighborhood(int a) const {
  std::vector<int> nbrs = neighbors(a);
  nbrs.push_back(a);
  std::sort(nbrs.begin(), nbrs.end());
  return nbrs;
}

int Graph::max_degree() const {
  int d = 0;
  for (int a = 1; a <= n_; ++a) d = std::max(d, degree(a));
  return d;
}

bool Graph::has_isolated_vertex() const {
  for (int a = 1; a <= n_; ++a)
    if (degree(a) == 0) return true;
  return false;
}

IntegerMatrix Graph::adjacency_matrix() const {
  IntegerMatrix m(n_);
  for (auto [a, b] : edges_) {
    m.at(a - 1, b - 1) = 1;
    m.at(b - 1, a - 1) = 1;
  }
  return m;
}

IntegerMatrix Graph::promise_matrix(Axis axis) const {
  switch (axis) {
    case Axis::Z: return IntegerMatrix::identity(n_);
    case Axis::X: return adjacency_matrix();
    case Axis::Y: return adjacency_matrix().plus_identity();
  }
  throw std::invalid_argument("invalid axis");
}

Graph make_open_chain(int m) {
  if (m < 1) throw std::invalid_argument("chain size must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a < m; ++a) edges.push_back({a, a + 1});
  return Graph(m, edges);
}

Graph make_closed_chain(int m) {
  if (m < 1) throw std::invalid_argument("chain size must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a < m; ++a) edges.push_back({a, a + 1});
  if (m >= 3) edges.push_back({m, 1});
  return Graph(m, edges);
}

Graph make_lattice(const std::vector<int>& sizes, const std::vector<Boundary>& boundary) {
  if (sizes.empty()) throw std::invalid_argument("lattice needs at least one dimension");
  if (sizes.size() != boundary.size()) {
    throw std::invalid_argument("one boundary flag per dimension required");
  }
  long long total = 1;
  for (int m : sizes) {
    if (m < 1) throw std::invalid_argument("lattice dimension sizes must be >= 1");
    total *= m;
    if (total > 1'000'000) throw std::invalid_argument("lattice too large");
  }
  const int d = static_cast<int>(sizes.size());
  const int n = static_cast<int>(total);

  // strides[r] = product of sizes of the faster-varying dimensions after r
  std::vector<long long> strides(d, 1);
  for (int r = d - 2; r >= 0; --r) strides[r] = strides[r + 1] * sizes[r + 1];

  auto vertex_id = [&](const std::vector<int>& coord) {
    long long id = 0;
    for (int r = 0; r < d; ++r) id += static_cast<long long>(coord[r] - 1) * strides[r];
    return static_cast<int>(id) + 1;
  };

  std::vector<std::pair<int, int>> edges;
  std::vector<int> coord(d, 1);
  for (int v = 0; v < n; ++v) {
    for (int r = 0; r < d; ++r) {
      if (coord[r] < sizes[r]) {
        std::vector<int> next = coord;
        next[r] += 1;
        edges.push_back({vertex_id(coord), vertex_id(next)});
      } else if (boundary[r] == Boundary::Closed && sizes[r] >= 3) {
        std::vector<int> wrap = coord;
        wrap[r] = 1;
        edges.push_back({vertex_id(coord), vertex_id(wrap)});
      }
    }
    // advance coordinate, last dimension fastest
    for (int r = d - 1; r >= 0; --r) {
      if (++coord[r] <= sizes[r]) break;
      coord[r] = 1;
    }
  }
  return Graph(n, edges);
}

Graph make_ghz_complete(int n) {
  if (n < 1) throw std::invalid_argument("GHZ size must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) edges.push_back({a, b});
  return Graph(n, edges);
}

Graph make_ghz_star(int n) {
  if (n < 1) throw std::invalid_argument("GHZ size must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int b = 2; b <= n; ++b) edges.push_back({1, b});
  return Graph(n, edges);
}

Graph make_steane5plus1() {
  std::vector<std::pair<int, int>> edges = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}};
  for (int b = 1; b <= 5; ++b) edges.push_back({6, b});
  return Graph(6, edges);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

int parse_positive(const std::string& s, const char* what) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + s + "'");
  }
  if (pos != s.size() || value < 1) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + s + "'");
  }
  return value;
}

}  // namespace

Graph make_graph_from_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty graph spec");
  const std::string& kind = parts[0];

  auto want_args = [&](std::size_t k) {
    if (parts.size() != k + 1) {
      throw std::invalid_argument("graph spec '" + spec + "' has wrong number of arguments");
    }
  };

  if (kind == "open_chain") {
    want_args(1);
    return make_open_chain(parse_positive(parts[1], "chain size"));
  }
  if (kind == "closed_chain") {
    want_args(1);
    return make_closed_chain(parse_positive(parts[1], "chain size"));
  }
  if (kind == "ghz_complete") {
    want_args(1);
    return make_ghz_complete(parse_positive(parts[1], "GHZ size"));
  }
  if (kind == "ghz_star") {
    want_args(1);
    return make_ghz_star(parse_positive(parts[1], "GHZ size"));
  }
  if (kind == "steane5plus1") {
    want_args(0);
    return make_steane5plus1();
  }
  if (kind == "lattice") {
    want_args(2);
    std::vector<int> sizes;
    for (const std::string& s : split(parts[1], 'x')) sizes.push_back(parse_positive(s, "lattice size"));
    std::vector<Boundary> boundary;
    for (const std::string& b : split(parts[2], ',')) {
      if (b == "open")
        boundary.push_back(Boundary::Open);
      else if (b == "closed")
        boundary.push_back(Boundary::Closed);
      else
        throw std::invalid_argument("boundary flag must be 'open' or 'closed', got '" + b + "'");
    }
    return make_lattice(sizes, boundary);
  }
  throw std::invalid_argument("unknown graph spec kind '" + kind + "'");
}

Graph graph_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be a pair [a, b]");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return Graph(n, edges);
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

}  // namespace strayfield
