#pragma once

// Matchgate algebra on two qubits: recognition of the block form
//
//   U = [ a11  .   .  a12 ]          outer block A on {|00>, |11>}
//       [  .  b11 b12  .  ]          inner block B on {|01>, |10>}
//       [  .  b21 b22  .  ]
//       [ a21  .   .  a22 ]          accepted iff det(A) = det(B)
//
// plus the XX entangler exp(-i J X1X2 t), a small single-qubit gate library,
// and CZ / CNOT circuit constructions from the entangler.
//
// Basis ordering |00>, |01>, |10>, |11> with qubit 1 the leftmost factor.

#include <string>
#include <vector>

#include "molgate/linalg.hpp"
#include "molgate/units.hpp"

namespace molgate {

struct GateMatrix {
  Matrix entries;

  explicit GateMatrix(Matrix m, double unitary_tol = 1e-10)
      : entries(std::move(m)) {
    const auto dim = entries.rows();
    if ((dim != 2 && dim != 4) || entries.cols() != dim)
      throw std::invalid_argument("GateMatrix: dimension must be 2 or 4");
    const double err = (entries.adjoint() * entries - Matrix::Identity(dim, dim))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > unitary_tol)
      throw std::invalid_argument("GateMatrix: not unitary, |U^+U - 1| = " +
                                  std::to_string(err));
  }
};

struct MatchgateDecomposition {
  Matrix a, b;  // 2x2 blocks
  Complex det_a, det_b;
  double residual = 0.0;       // max off-block magnitude
  double det_mismatch = 0.0;   // |det_a - det_b|
  bool accepted = false;
};

inline MatchgateDecomposition is_matchgate(const GateMatrix& u,
                                           double tol = 1e-10) {
  const Matrix& m = u.entries;
  if (m.rows() != 4)
    throw std::invalid_argument("is_matchgate: need a two-qubit gate");
  MatchgateDecomposition out;
  out.a = Matrix(2, 2);
  out.a << m(0, 0), m(0, 3), m(3, 0), m(3, 3);
  out.b = Matrix(2, 2);
  out.b << m(1, 1), m(1, 2), m(2, 1), m(2, 2);
  double res = 0.0;
  const bool outer[4] = {true, false, false, true};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (outer[r] != outer[c]) res = std::max(res, std::abs(m(r, c)));
  out.residual = res;
  out.det_a = out.a(0, 0) * out.a(1, 1) - out.a(0, 1) * out.a(1, 0);
  out.det_b = out.b(0, 0) * out.b(1, 1) - out.b(0, 1) * out.b(1, 0);
  out.det_mismatch = std::abs(out.det_a - out.det_b);
  out.accepted = out.residual < tol && out.det_mismatch < tol;
  return out;
}

// Inverse of the block extraction; A and B should be unitary 2x2.
inline GateMatrix compose_from_blocks(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = a(0, 0);
  m(0, 3) = a(0, 1);
  m(3, 0) = a(1, 0);
  m(3, 3) = a(1, 1);
  m(1, 1) = b(0, 0);
  m(1, 2) = b(0, 1);
  m(2, 1) = b(1, 0);
  m(2, 2) = b(1, 1);
  return GateMatrix(std::move(m));
}

// --- gate library ------------------------------------------------------------

namespace gates {

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// R_nu(theta) = exp(-i theta sigma_nu / 2).
inline Matrix rotation(const Matrix& sigma, double theta) {
  return std::cos(0.5 * theta) * Matrix::Identity(2, 2) -
         imag_unit * std::sin(0.5 * theta) * sigma;
}

inline Matrix rx(double theta) { return rotation(pauli::x(), theta); }
inline Matrix ry(double theta) { return rotation(pauli::y(), theta); }
inline Matrix rz(double theta) { return rotation(pauli::z(), theta); }

inline Matrix on_qubit1(const Matrix& g) {
  return kron(g, Matrix::Identity(2, 2));
}

inline Matrix on_qubit2(const Matrix& g) {
  return kron(Matrix::Identity(2, 2), g);
}

inline Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

inline Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

inline Matrix swap() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

}  // namespace gates

// exp(-i J X1X2 t) = cos(Jt) 1 - i sin(Jt) X1X2.
inline GateMatrix xx_gate(double j, double t) {
  const Matrix xx = kron(pauli::x(), pauli::x());
  return GateMatrix(std::cos(j * t) * Matrix::Identity(4, 4) -
                    imag_unit * std::sin(j * t) * xx);
}

// ||U - e^{i phi} V||_max < tol for some phi, extracted from the
// largest-magnitude entry of V.
struct PhaseComparison {
  bool equal = false;
  double phase = 0.0;
  double max_deviation = 0.0;
};

inline PhaseComparison equal_up_to_global_phase(const Matrix& u,
                                                const Matrix& v,
                                                double tol = 1e-10) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  Eigen::Index rmax = 0, cmax = 0;
  v.cwiseAbs().maxCoeff(&rmax, &cmax);
  PhaseComparison out;
  if (std::abs(v(rmax, cmax)) == 0.0) {
    out.max_deviation = u.cwiseAbs().maxCoeff();
    out.equal = out.max_deviation < tol;
    return out;
  }
  const Complex ratio = u(rmax, cmax) / v(rmax, cmax);
  out.phase = std::arg(ratio);
  const Complex phase_factor = std::exp(Complex(0.0, out.phase));
  out.max_deviation = (u - phase_factor * v).cwiseAbs().maxCoeff();
  out.equal = out.max_deviation < tol;
  return out;
}

// --- CZ / CNOT circuits -------------------------------------------------------

struct NamedGate {
  std::string name;
  Matrix matrix;  // 4x4, already lifted to the two-qubit space
};

struct Circuit {
  std::vector<NamedGate> gates;  // in application order (first acts first)
  Matrix composed;               // product, leftmost gate applied last
};

inline Circuit compose(std::vector<NamedGate> gates) {
  Matrix u = Matrix::Identity(4, 4);
  for (const auto& g : gates) u = g.matrix * u;
  return {std::move(gates), std::move(u)};
}

// sqrt(-i) Rz1(-pi/2) Rz2(-pi/2) (H x H) U(pi/4J) (H x H); composes to CZ up
// to machine precision. The entangler can be replaced by an externally
// produced matrix (e.g. from the propagator).
inline Circuit cz_circuit_from(const Matrix& entangler) {
  using namespace gates;
  const Matrix hh = kron(hadamard(), hadamard());
  std::vector<NamedGate> seq = {
      {"H1*H2", hh},
      {"U(pi/4J)", entangler},
      {"H1*H2", hh},
      {"Rz2(-pi/2)", on_qubit2(rz(-units::pi / 2))},
      {"Rz1(-pi/2)", on_qubit1(rz(-units::pi / 2))},
      {"sqrt(-i)", std::exp(Complex(0.0, -units::pi / 4)) *
                       Matrix::Identity(4, 4)},
  };
  return compose(std::move(seq));
}

inline Circuit cz_circuit(double j) {
  if (j <= 0.0) throw std::invalid_argument("cz_circuit: J must be positive");
  return cz_circuit_from(xx_gate(j, units::pi / (4.0 * j)).entries);
}

// i Rz1(pi) Ry2(-pi/2) U_CZ Ry2(pi/2) = CNOT with qubit 1 as control.
inline Circuit cnot_circuit_from(const Matrix& u_cz) {
  using namespace gates;
  std::vector<NamedGate> seq = {
      {"Ry2(pi/2)", on_qubit2(ry(units::pi / 2))},
      {"U_CZ", u_cz},
      {"Ry2(-pi/2)", on_qubit2(ry(-units::pi / 2))},
      {"Rz1(pi)", on_qubit1(rz(units::pi))},
      {"i", Complex(0.0, 1.0) * Matrix::Identity(4, 4)},
  };
  return compose(std::move(seq));
}

inline Circuit cnot_circuit(double j) {
  if (j <= 0.0) throw std::invalid_argument("cnot_circuit: J must be positive");
  return cnot_circuit_from(cz_circuit(j).composed);
}

}  // namespace molgate
