#pragma once

// Dense complex linear algebra helpers shared by every module: Hermitian
// operators with a unit tag, exact exponentials through eigendecomposition,
// phase conventions and state overlaps.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace molgate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex imag_unit{0.0, 1.0};

// Dense Hermitian matrix with a unit tag. Hermiticity is validated at
// construction: max|H - H^dag| must stay below tol_rel * max|H|.
struct HermitianOperator {
  Matrix entries;
  std::string unit = "rad/s";

  HermitianOperator() = default;
  explicit HermitianOperator(Matrix m, std::string unit_tag = "rad/s",
                             double tol_rel = 1e-12)
      : entries(std::move(m)), unit(std::move(unit_tag)) {
    const double err = hermiticity_error(entries);
    const double scale = entries.cwiseAbs().maxCoeff();
    if (scale > 0.0 && err > tol_rel * scale)
      throw std::runtime_error("HermitianOperator: matrix not Hermitian, |H-H^+| = " +
                               std::to_string(err));
  }

  Eigen::Index dim() const { return entries.rows(); }

  static double hermiticity_error(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  }
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// U = exp(-i H t) for Hermitian H, exactly unitary up to roundoff.
inline Matrix expm_i_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("expm_i_hermitian: eigendecomposition failed");
  const auto& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

// Rotate the global phase so the largest-magnitude component is real positive.
inline Vector fix_phase(Vector v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex c = v(imax);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
  return v;
}

// Amplitude overlap |<target|psi>| of normalized states.
inline double fidelity(const Vector& psi, const Vector& target) {
  if (psi.size() != target.size())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const double np = psi.norm(), nt = target.norm();
  if (np == 0.0 || nt == 0.0)
    throw std::invalid_argument("fidelity: zero-norm state");
  return std::abs(target.dot(psi)) / (np * nt);
}

// Global-phase-aligned Euclidean distance between states.
inline double state_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("state_distance: dimension mismatch");
  const Complex ov = a.dot(b);
  if (std::abs(ov) == 0.0) return (a - b).norm();
  const Complex phase = ov / std::abs(ov);
  return (a * phase - b).norm();
}

namespace pauli {

inline Matrix identity() { return Matrix::Identity(2, 2); }

inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

}  // namespace molgate
