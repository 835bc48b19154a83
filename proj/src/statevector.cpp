#include "strayfield/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace strayfield {

namespace {

constexpr Amplitude kI{0.0, 1.0};

}  // namespace

StateVector::StateVector(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("state vector needs at least one qubit");
  if (n > kStateVectorQubitCap) {
    throw std::invalid_argument("state vector capped at 12 qubits");
  }
  amp_.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
  amp_[0] = 1.0;
}

std::size_t StateVector::bit(int qubit) const {
  if (qubit < 1 || qubit > n_) throw std::invalid_argument("qubit out of range [1, n]");
  return std::size_t{1} << (n_ - qubit);
}

StateVector StateVector::graph_state(const Graph& g) {
  StateVector psi(g.vertex_count());
  const double amp = std::pow(2.0, -0.5 * g.vertex_count());
  // Sign of each computational basis state: parity of edges with both
  // endpoints set, which is what the CZ ladder on |+>^n produces.
  for (std::size_t z = 0; z < psi.amp_.size(); ++z) {
    int parity = 0;
    for (auto [a, b] : g.edges()) {
      const std::size_t mask = psi.bit(a) | psi.bit(b);
      parity ^= ((z & mask) == mask) ? 1 : 0;
    }
    psi.amp_[z] = parity ? -amp : amp;
  }
  return psi;
}

void StateVector::apply_single(int qubit, const SingleQubitGate& u) {
  const std::size_t mask = bit(qubit);
  for (std::size_t z = 0; z < amp_.size(); ++z) {
    if (z & mask) continue;
    const Amplitude a0 = amp_[z];
    const Amplitude a1 = amp_[z | mask];
    amp_[z] = u[0] * a0 + u[1] * a1;
    amp_[z | mask] = u[2] * a0 + u[3] * a1;
  }
}

void StateVector::apply_cz(int a, int b) {
  const std::size_t mask = bit(a) | bit(b);
  if (bit(a) == bit(b)) throw std::invalid_argument("CZ needs two distinct qubits");
  for (std::size_t z = 0; z < amp_.size(); ++z) {
    if ((z & mask) == mask) amp_[z] = -amp_[z];
  }
}

void StateVector::apply_field(const FieldConfig& cfg) {
  if (cfg.size() != n_) throw std::invalid_argument("field configuration size mismatch");
  for (int a = 1; a <= n_; ++a) {
    apply_single(a, rotation_gate(cfg.lambda(a), cfg.axis(a)));
  }
}

void StateVector::apply_pauli_direction(int qubit, const Vec3& v) {
  const SingleQubitGate op = {Amplitude{v[2], 0.0}, Amplitude{v[0], -v[1]},
                              Amplitude{v[0], v[1]}, Amplitude{-v[2], 0.0}};
  apply_single(qubit, op);
}

Amplitude StateVector::inner(const StateVector& other) const {
  if (other.n_ != n_) throw std::invalid_argument("qubit count mismatch");
  Amplitude sum{0.0, 0.0};
  for (std::size_t z = 0; z < amp_.size(); ++z) sum += std::conj(amp_[z]) * other.amp_[z];
  return sum;
}

double StateVector::squared_norm() const {
  double sum = 0.0;
  for (const Amplitude& a : amp_) sum += std::norm(a);
  return sum;
}

void StateVector::normalize() {
  const double n = std::sqrt(squared_norm());
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  for (Amplitude& a : amp_) a /= n;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  if (other.n_ != n_) throw std::invalid_argument("qubit count mismatch");
  for (std::size_t z = 0; z < amp_.size(); ++z) amp_[z] += other.amp_[z];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  if (other.n_ != n_) throw std::invalid_argument("qubit count mismatch");
  for (std::size_t z = 0; z < amp_.size(); ++z) amp_[z] -= other.amp_[z];
  return *this;
}

void StateVector::scale(double factor) {
  for (Amplitude& a : amp_) a *= factor;
}

SingleQubitGate rotation_gate(double lambda, const Vec3& axis) {
  const double c = std::cos(lambda / 2.0);
  const double s = std::sin(lambda / 2.0);
  // cos(l/2) I - i sin(l/2) (n.S)
  return {Amplitude{c, -s * axis[2]}, -kI * Amplitude{s * axis[0], -s * axis[1]},
          -kI * Amplitude{s * axis[0], s * axis[1]}, Amplitude{c, s * axis[2]}};
}

SingleQubitGate basis_change_gate(const LogicalBasis& basis) {
  // Rotation matrix with columns (r, s, t): maps x->r, y->s, z->t.
  const Vec3& r = basis.r();
  const Vec3& s = basis.s();
  const Vec3& t = basis.t();
  const double o[3][3] = {{r[0], s[0], t[0]}, {r[1], s[1], t[1]}, {r[2], s[2], t[2]}};

  // Shepperd's method: recover the unit quaternion (w, x, y, z) of O.
  const double trace = o[0][0] + o[1][1] + o[2][2];
  double w, x, y, z;
  if (trace > 0.0) {
    const double u = std::sqrt(1.0 + trace) * 2.0;
    w = 0.25 * u;
    x = (o[2][1] - o[1][2]) / u;
    y = (o[0][2] - o[2][0]) / u;
    z = (o[1][0] - o[0][1]) / u;
  } else if (o[0][0] > o[1][1] && o[0][0] > o[2][2]) {
    const double u = std::sqrt(1.0 + o[0][0] - o[1][1] - o[2][2]) * 2.0;
    w = (o[2][1] - o[1][2]) / u;
    x = 0.25 * u;
    y = (o[0][1] + o[1][0]) / u;
    z = (o[0][2] + o[2][0]) / u;
  } else if (o[1][1] > o[2][2]) {
    const double u = std::sqrt(1.0 - o[0][0] + o[1][1] - o[2][2]) * 2.0;
    w = (o[0][2] - o[2][0]) / u;
    x = (o[0][1] + o[1][0]) / u;
    y = 0.25 * u;
    z = (o[1][2] + o[2][1]) / u;
  } else {
    const double u = std::sqrt(1.0 - o[0][0] - o[1][1] + o[2][2]) * 2.0;
    w = (o[1][0] - o[0][1]) / u;
    x = (o[0][2] + o[2][0]) / u;
    y = (o[1][2] + o[2][1]) / u;
    z = 0.25 * u;
  }

  // R = w I - i (x X + y Y + z Z)
  return {Amplitude{w, -z}, Amplitude{-y, -x}, Amplitude{y, -x}, Amplitude{w, z}};
}

}  // namespace strayfield
