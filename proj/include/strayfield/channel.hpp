#pragma once

#include <array>
#include <vector>

#include "json.hpp"
#include "strayfield/graph.hpp"

namespace strayfield {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

// Per-vertex rotation: angle lambda about the unit axis n.
struct VertexField {
  double lambda = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
};

// The per-qubit field parameters (lambda_a, n_a); the estimation target.
// Construction validates unit norms (1e-12) and canonicalizes every axis to
// the n_y >= 0 hemisphere via the gauge transformation
// (lambda -> -lambda, n -> -n), which leaves the channel unchanged.
class FieldConfig {
 public:
  explicit FieldConfig(std::vector<VertexField> fields);

  // All fields aligned with a Cartesian axis, angles given per vertex.
  static FieldConfig aligned(Axis axis, const std::vector<double>& lambdas);

  int size() const { return static_cast<int>(fields_.size()); }
  double lambda(int a) const { return fields_[check(a)].lambda; }
  const Vec3& axis(int a) const { return fields_[check(a)].axis; }
  double beta(int a) const;  // cos(lambda_a)
  std::vector<double> betas() const;
  const std::vector<VertexField>& fields() const { return fields_; }

 private:
  std::size_t check(int a) const;
  std::vector<VertexField> fields_;
};

// JSON schema: {"fields": [{"lambda": float, "n": [nx, ny, nz]}, ...]}.
FieldConfig field_config_from_json(const nlohmann::json& j);
nlohmann::json field_config_to_json(const FieldConfig& cfg);

// Right-handed orthonormal triple (r, s, t) redefining the Pauli frame.
class LogicalBasis {
 public:
  LogicalBasis(const Vec3& r, const Vec3& s, const Vec3& t);
  static LogicalBasis standard();  // (x, y, z)

  const Vec3& r() const { return r_; }
  const Vec3& s() const { return s_; }
  const Vec3& t() const { return t_; }

 private:
  Vec3 r_, s_, t_;
};

// Per-vertex probability differences Delta p_a = p(k=0) - p(k=1).
struct ProbabilityDifferences {
  std::vector<double> values;  // values[a-1] for vertex a

  int size() const { return static_cast<int>(values.size()); }
  double at(int a) const { return values.at(static_cast<std::size_t>(a - 1)); }
};

// Closed-form probability difference for the correlator at vertex a under
// arbitrary per-vertex fields. The graph must have no isolated vertices
// (the derivation needs <X_a> = 0 on the clean graph state).
double delta_p_general(const FieldConfig& cfg, const Graph& g, int a);
ProbabilityDifferences delta_p_general_all(const FieldConfig& cfg, const Graph& g);

// Same quantity with the correlators re-expressed in a logical Pauli basis:
// the first factor uses (r.n_a)^2, each neighbor factor uses (t.n_b)^2.
double delta_p_rotated(const FieldConfig& cfg, const Graph& g, const LogicalBasis& basis, int a);
ProbabilityDifferences delta_p_rotated_all(const FieldConfig& cfg, const Graph& g,
                                           const LogicalBasis& basis);

// Promise-setting shortcuts: Z -> beta_a, X -> prod over neighbors,
// Y -> beta_a times the neighbor product.
double delta_p_promise(Axis axis, const std::vector<double>& betas, const Graph& g, int a);
ProbabilityDifferences delta_p_promise_all(Axis axis, const std::vector<double>& betas,
                                           const Graph& g);

// Uniform depolarizing channel with strength q scales every entry by (1-q).
ProbabilityDifferences apply_depolarizing(const ProbabilityDifferences& dp, double q);

}  // namespace strayfield
