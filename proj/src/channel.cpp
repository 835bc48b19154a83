#include "strayfield/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace strayfield {

namespace {

constexpr double kUnitTol = 1e-12;

void require_no_isolated(const Graph& g) {
  if (g.has_isolated_vertex()) {
    throw std::invalid_argument(
        "probability differences are undefined for graphs with isolated vertices");
  }
}

// One factor of the product form: (c)^2 + beta * (1 - (c)^2).
double field_factor(double component, double beta) {
  const double c2 = component * component;
  return c2 + beta * (1.0 - c2);
}

}  // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

FieldConfig::FieldConfig(std::vector<VertexField> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) throw std::invalid_argument("field configuration must not be empty");
  for (VertexField& f : fields_) {
    const double len = norm(f.axis);
    if (std::abs(len - 1.0) > kUnitTol) {
      throw std::invalid_argument("field axis must be a unit vector (within 1e-12)");
    }
    for (double& c : f.axis) c /= len;
    if (f.axis[1] < 0.0) {
      // gauge fix to the n_y >= 0 hemisphere
      f.lambda = -f.lambda;
      for (double& c : f.axis) c = -c;
    }
  }
}

FieldConfig FieldConfig::aligned(Axis axis, const std::vector<double>& lambdas) {
  Vec3 n{0.0, 0.0, 0.0};
  switch (axis) {
    case Axis::X: n[0] = 1.0; break;
    case Axis::Y: n[1] = 1.0; break;
    case Axis::Z: n[2] = 1.0; break;
  }
  std::vector<VertexField> fields;
  fields.reserve(lambdas.size());
  for (double lambda : lambdas) fields.push_back({lambda, n});
  return FieldConfig(std::move(fields));
}

std::size_t FieldConfig::check(int a) const {
  if (a < 1 || a > size()) throw std::invalid_argument("vertex out of range [1, n]");
  return static_cast<std::size_t>(a - 1);
}

double FieldConfig::beta(int a) const { return std::cos(fields_[check(a)].lambda); }

std::vector<double> FieldConfig::betas() const {
  std::vector<double> b;
  b.reserve(fields_.size());
  for (const VertexField& f : fields_) b.push_back(std::cos(f.lambda));
  return b;
}

FieldConfig field_config_from_json(const nlohmann::json& j) {
  std::vector<VertexField> fields;
  for (const auto& f : j.at("fields")) {
    VertexField vf;
    vf.lambda = f.at("lambda").get<double>();
    const auto& n = f.at("n");
    if (!n.is_array() || n.size() != 3) throw std::invalid_argument("axis must be [nx, ny, nz]");
    vf.axis = {n[0].get<double>(), n[1].get<double>(), n[2].get<double>()};
    fields.push_back(vf);
  }
  return FieldConfig(std::move(fields));
}

nlohmann::json field_config_to_json(const FieldConfig& cfg) {
  nlohmann::json fields = nlohmann::json::array();
  for (const VertexField& f : cfg.fields()) {
    fields.push_back({{"lambda", f.lambda}, {"n", {f.axis[0], f.axis[1], f.axis[2]}}});
  }
  return {{"fields", fields}};
}

LogicalBasis::LogicalBasis(const Vec3& r, const Vec3& s, const Vec3& t) : r_(r), s_(s), t_(t) {
  const double tol = kUnitTol;
  if (std::abs(norm(r_) - 1.0) > tol || std::abs(norm(s_) - 1.0) > tol ||
      std::abs(norm(t_) - 1.0) > tol) {
    throw std::invalid_argument("basis vectors must be unit length");
  }
  if (std::abs(dot(r_, s_)) > tol || std::abs(dot(r_, t_)) > tol || std::abs(dot(s_, t_)) > tol) {
    throw std::invalid_argument("basis vectors must be pairwise orthogonal");
  }
  const Vec3 rxs = cross(r_, s_);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(rxs[i] - t_[i]) > tol) {
      throw std::invalid_argument("basis must be right-handed (r x s = t)");
    }
  }
}

LogicalBasis LogicalBasis::standard() {
  return LogicalBasis({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0});
}

double delta_p_rotated(const FieldConfig& cfg, const Graph& g, const LogicalBasis& basis, int a) {
  require_no_isolated(g);
  if (cfg.size() != g.vertex_count()) {
    throw std::invalid_argument("field configuration size does not match graph");
  }
  double value = field_factor(dot(basis.r(), cfg.axis(a)), cfg.beta(a));
  for (int b : g.neighbors(a)) {
    value *= field_factor(dot(basis.t(), cfg.axis(b)), cfg.beta(b));
  }
  return value;
}

double delta_p_general(const FieldConfig& cfg, const Graph& g, int a) {
  return delta_p_rotated(cfg, g, LogicalBasis::standard(), a);
}

ProbabilityDifferences delta_p_rotated_all(const FieldConfig& cfg, const Graph& g,
                                           const LogicalBasis& basis) {
  ProbabilityDifferences dp;
  dp.values.reserve(static_cast<std::size_t>(g.vertex_count()));
  for (int a = 1; a <= g.vertex_count(); ++a) dp.values.push_back(delta_p_rotated(cfg, g, basis, a));
  return dp;
}

ProbabilityDifferences delta_p_general_all(const FieldConfig& cfg, const Graph& g) {
  return delta_p_rotated_all(cfg, g, LogicalBasis::standard());
}

double delta_p_promise(Axis axis, const std::vector<double>& betas, const Graph& g, int a) {
  require_no_isolated(g);
  if (static_cast<int>(betas.size()) != g.vertex_count()) {
    throw std::invalid_argument("beta vector size does not match graph");
  }
  auto beta = [&](int v) { return betas[static_cast<std::size_t>(v - 1)]; };
  double value = 1.0;
  switch (axis) {
    case Axis::Z:
      return beta(a);
    case Axis::Y:
      value = beta(a);
      [[fallthrough]];
    case Axis::X:
      for (int b : g.neighbors(a)) value *= beta(b);
      return value;
  }
  throw std::invalid_argument("invalid axis");
}

ProbabilityDifferences delta_p_promise_all(Axis axis, const std::vector<double>& betas,
                                           const Graph& g) {
  ProbabilityDifferences dp;
  dp.values.reserve(static_cast<std::size_t>(g.vertex_count()));
  for (int a = 1; a <= g.vertex_count(); ++a) dp.values.push_back(delta_p_promise(axis, betas, g, a));
  return dp;
}

ProbabilityDifferences apply_depolarizing(const ProbabilityDifferences& dp, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("depolarizing strength must be in [0, 1]");
  ProbabilityDifferences out = dp;
  for (double& v : out.values) v *= 1.0 - q;
  return out;
}

}  // namespace strayfield
