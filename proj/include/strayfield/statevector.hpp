#pragma once

#include <array>
#include <complex>
#include <vector>

#include "strayfield/channel.hpp"
#include "strayfield/graph.hpp"

namespace strayfield {

// Dense amplitudes are capped at 12 qubits (4096 complex entries); the
// oracle is a desk-scale cross-check, not a production simulator.
inline constexpr int kStateVectorQubitCap = 12;

using Amplitude = std::complex<double>;
using SingleQubitGate = std::array<Amplitude, 4>;  // row-major 2x2

// Dense state vector over qubits 1..n (qubit 1 owns the highest bit so index
// order matches vertex order).
class StateVector {
 public:
  explicit StateVector(int n);

  // |G> = prod_{(a,b) in E} CZ_{a,b} |+>^n.
  static StateVector graph_state(const Graph& g);

  int qubit_count() const { return n_; }
  const std::vector<Amplitude>& amplitudes() const { return amp_; }

  void apply_single(int qubit, const SingleQubitGate& u);
  void apply_cz(int a, int b);
  // Applies exp(-i lambda_a n_a . S / 2) on every vertex.
  void apply_field(const FieldConfig& cfg);
  // Applies the Hermitian operator v . S = vx X + vy Y + vz Z on one qubit.
  void apply_pauli_direction(int qubit, const Vec3& v);

  Amplitude inner(const StateVector& other) const;
  double squared_norm() const;
  void normalize();

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  void scale(double factor);

 private:
  std::size_t bit(int qubit) const;  // bit mask selector for a 1-based qubit
  int n_ = 0;
  std::vector<Amplitude> amp_;
};

// exp(-i lambda n.S / 2) as a 2x2 matrix.
SingleQubitGate rotation_gate(double lambda, const Vec3& axis);

// The SU(2) element R with R X R^dag = r.S, R Y R^dag = s.S, R Z R^dag = t.S,
// i.e. the spin-1/2 representative of the frame rotation. Built from the
// quaternion of the SO(3) matrix with columns (r, s, t).
SingleQubitGate basis_change_gate(const LogicalBasis& basis);

}  // namespace strayfield
