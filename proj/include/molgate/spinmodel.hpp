#pragma once

// Effective rotating-frame spin Hamiltonians on the dressed qubit
// {|D>, |e>} per site:
//
//   H = sum_i b_i Z_i + sum_{i<j} J_ij X_i X_j + K_ij Y_i Y_j
//                     + L_ij (X_i Y_j + Y_i X_j) + M_ij Z_i Z_j
//
// with phase-controlled couplings J = A^2 U_dd, K = B^2 U_dd, L = -A B U_dd
// from the Raman phase beta (A = -sin(a) cos(b) d_eg', B = -sin(a) sin(b)
// d_eg'), and a ZZ extension from the chirped-microwave permanent dipole
// d_e- = -2 cos(th) sin(th) d_ee'. The parameter space obeys L^2 = J K,
// J + K <= U_dd and M <= U_dd / 4.
//
// Coupling tables are indexed by unordered pair {i < j} and hold the full
// coefficient of the operator in H (applied once); b_i and M_ij follow the
// ordered-pair bookkeeping of the source expressions, b_i = eps_e/2 +
// sum_j U_ij/2 and M_ij = U_ij/4.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "molgate/errors.hpp"
#include "molgate/linalg.hpp"
#include "molgate/pairgate.hpp"
#include "molgate/units.hpp"

namespace molgate {

struct CouplingSet {
  double j = 0.0, k = 0.0, l = 0.0, m = 0.0;
  double u = 0.0;      // ZZ-extension pair energy U_ij
  double u_dd = 0.0;   // bare U_dd(Theta) for the constraint checks
  double a_cal = 0.0;  // A, dipole quadrature along X
  double b_cal = 0.0;  // B, dipole quadrature along Y
};

inline CouplingSet couplings_from_phase(double alpha, double beta,
                                        double d_eg_prime, double u_dd) {
  CouplingSet c;
  c.a_cal = -std::sin(alpha) * std::cos(beta) * d_eg_prime;
  c.b_cal = -std::sin(alpha) * std::sin(beta) * d_eg_prime;
  c.j = c.a_cal * c.a_cal * u_dd;
  c.k = c.b_cal * c.b_cal * u_dd;
  c.l = -c.a_cal * c.b_cal * u_dd;
  c.u_dd = u_dd;
  return c;
}

// --- chirped adiabatic passage on {|e>, |e'>} -----------------------------------

struct ChirpResult {
  std::vector<double> theta;  // mixing angle theta(t) on the grid
  double margin = 0.0;        // max |dDelta/dt| Omega / (2 (Delta^2+Omega^2)^{3/2})
};

// tan(2 theta) = Omega_mu / Delta_mu with the branch theta -> 0 as
// Delta_mu -> -inf and theta -> pi/4 at resonance. Delta_mu must be
// monotone on the grid (otherwise the branch is ambiguous).
inline ChirpResult chirped_passage(double omega_mu,
                                   const std::function<double(double)>& delta_mu,
                                   const std::vector<double>& t_grid) {
  if (omega_mu <= 0.0) throw ConfigError("chirped_passage: Omega_mu must be positive");
  if (t_grid.size() < 2) throw ConfigError("chirped_passage: need at least two grid points");
  std::vector<double> d(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) d[i] = delta_mu(t_grid[i]);
  const bool increasing = d.back() > d.front();
  for (std::size_t i = 1; i < d.size(); ++i)
    if ((d[i] - d[i - 1]) * (increasing ? 1.0 : -1.0) < 0.0)
      throw ConfigError("chirped_passage: Delta_mu must be monotone on the grid");

  ChirpResult out;
  out.theta.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    out.theta[i] = 0.5 * std::atan2(omega_mu, -d[i]);

  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double slope;
    if (i == 0)
      slope = (d[1] - d[0]) / (t_grid[1] - t_grid[0]);
    else if (i + 1 == t_grid.size())
      slope = (d[i] - d[i - 1]) / (t_grid[i] - t_grid[i - 1]);
    else
      slope = (d[i + 1] - d[i - 1]) / (t_grid[i + 1] - t_grid[i - 1]);
    const double denom = 2.0 * std::pow(d[i] * d[i] + omega_mu * omega_mu, 1.5);
    out.margin = std::max(out.margin, std::abs(slope) * omega_mu / denom);
  }
  return out;
}

// d_e- = <e-|D0|e-> = -2 cos(th) sin(th) d_ee' with d_ee' = 2 sqrt((1-eta^2)/15).
inline double permanent_dipole(double theta, double eta) {
  const double d_eep = 2.0 * std::sqrt((1.0 - eta * eta) / 15.0);
  return -2.0 * std::cos(theta) * std::sin(theta) * d_eep;
}

// --- ZZ extension ----------------------------------------------------------------

struct ZzCouplings {
  double u = 0.0;  // U_ij = (d^2/r^3)(1 - 3cos^2 Theta)(d_e-)^2, rad/s
  double m = 0.0;  // M_ij = U_ij / 4
};

inline ZzCouplings zz_couplings(double d_debye, double r_m, double theta,
                                double d_minus) {
  if (r_m <= 0.0) throw ConfigError("zz_couplings: r must be positive");
  ZzCouplings z;
  z.u = units::dipole_dipole_rad_s(d_debye, r_m) * dd_angular(theta) *
        d_minus * d_minus;
  z.m = 0.25 * z.u;
  return z;
}

// b_i = eps_e/2 + sum_j U_ij/2; vanishes when eps_e = -sum_j U_ij.
inline double local_field(double eps_e, double sum_u_over_neighbors,
                          bool zz_active) {
  return 0.5 * eps_e + (zz_active ? 0.5 * sum_u_over_neighbors : 0.0);
}

inline double zero_field_eps_e(double sum_u_over_neighbors) {
  return -sum_u_over_neighbors;
}

// --- chain spec and dense Hamiltonian ----------------------------------------------

struct PairCoupling {
  int i = 0, j = 0;
  CouplingSet c;
};

struct SpinChainSpec {
  int n_sites = 2;
  std::vector<double> positions;  // site coordinates along the chain, m
  double theta = units::pi / 2;   // quantization axis vs chain angle
  double alpha = units::pi / 2;   // Raman mixing angle at the hold
  double beta = 0.0;              // Raman relative phase
  double theta_mu = 0.0;          // microwave mixing angle (ZZ extension)
  double eta = 0.0;
  double eps_e = 0.0;             // rad/s
  double d_debye = 1.0;
  bool zz_active = false;
  double omega_mu = 0.0;          // for the quasi-degeneracy warning

  void validate() const {
    if (n_sites < 1 || n_sites > 12)
      throw ConfigError("SpinChainSpec: n_sites must be in [1, 12] (dense construction)");
    if (static_cast<int>(positions.size()) != n_sites)
      throw ConfigError("SpinChainSpec: positions must have n_sites entries");
  }
};

// Couplings for every unordered pair from the chain geometry.
inline std::vector<PairCoupling> coupling_table(const SpinChainSpec& spec) {
  spec.validate();
  const double d_eg_prime = std::sqrt((1.0 - 0.5 * spec.eta * spec.eta) / 3.0);
  std::vector<PairCoupling> pairs;
  for (int i = 0; i < spec.n_sites; ++i)
    for (int j = i + 1; j < spec.n_sites; ++j) {
      const double r = std::abs(spec.positions[j] - spec.positions[i]);
      if (r <= 0.0) throw ConfigError("coupling_table: coincident sites");
      const double u_dd =
          units::dipole_dipole_rad_s(spec.d_debye, r) * dd_angular(spec.theta);
      PairCoupling pc;
      pc.i = i;
      pc.j = j;
      pc.c = couplings_from_phase(spec.alpha, spec.beta, d_eg_prime, u_dd);
      if (spec.zz_active) {
        const double d_minus = permanent_dipole(spec.theta_mu, spec.eta);
        const auto zz = zz_couplings(spec.d_debye, r, spec.theta, d_minus);
        pc.c.u = zz.u;
        pc.c.m = zz.m;
      }
      pairs.push_back(pc);
    }
  return pairs;
}

struct ConstraintReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

// L^2 = JK, J + K <= U_dd, M <= U_dd/4; Omega_mu << couplings for the
// quasi-degenerate ZZ extension (warning only).
inline ConstraintReport validate_couplings(const std::vector<PairCoupling>& pairs,
                                           double omega_mu = 0.0) {
  ConstraintReport rep;
  for (const auto& pc : pairs) {
    const auto& c = pc.c;
    const double scale = std::max({std::abs(c.j * c.k), c.l * c.l, 1e-300});
    if (std::abs(c.l * c.l - c.j * c.k) > 1e-10 * scale)
      rep.violations.push_back("pair (" + std::to_string(pc.i) + "," +
                               std::to_string(pc.j) + "): L^2 != J K");
    const double u_abs = std::abs(c.u_dd);
    if (u_abs > 0.0 && c.j + c.k > u_abs * (1.0 + 1e-12))
      rep.violations.push_back("pair (" + std::to_string(pc.i) + "," +
                               std::to_string(pc.j) + "): J + K > U_dd");
    if (u_abs > 0.0 && c.m > 0.25 * u_abs * (1.0 + 1e-12))
      rep.violations.push_back("pair (" + std::to_string(pc.i) + "," +
                               std::to_string(pc.j) + "): M > U_dd/4");
    if (omega_mu > 0.0 && c.m != 0.0) {
      const double jkl = std::max({std::abs(c.j), std::abs(c.k), std::abs(c.l)});
      if (omega_mu > jkl)
        rep.warnings.push_back("pair (" + std::to_string(pc.i) + "," +
                               std::to_string(pc.j) +
                               "): Omega_mu exceeds the couplings; |e-> is not "
                               "quasi-degenerate with |D>");
    }
  }
  return rep;
}

namespace detail {

// Operator op on the given site, identity elsewhere; site 0 is the leftmost
// tensor factor.
inline Matrix on_site(const Matrix& op, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s)
    out = kron(out, s == site ? op : Matrix::Identity(2, 2)).eval();
  return out;
}

inline Matrix two_site(const Matrix& a, int i, const Matrix& b, int j, int n) {
  return on_site(a, i, n) * on_site(b, j, n);
}

}  // namespace detail

// Dense 2^n Hamiltonian; n <= 12.
inline HermitianOperator build_hamiltonian(int n_sites,
                                           const std::vector<PairCoupling>& pairs,
                                           const std::vector<double>& b_fields,
                                           std::string unit = "rad/s") {
  if (n_sites < 1 || n_sites > 12)
    throw ConfigError("build_hamiltonian: n_sites must be in [1, 12]");
  if (static_cast<int>(b_fields.size()) != n_sites)
    throw ConfigError("build_hamiltonian: b_fields must have n_sites entries");
  const Eigen::Index dim = Eigen::Index(1) << n_sites;
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < n_sites; ++i)
    if (b_fields[i] != 0.0)
      h += b_fields[i] * detail::on_site(pauli::z(), i, n_sites);
  for (const auto& pc : pairs) {
    if (pc.i < 0 || pc.j <= pc.i || pc.j >= n_sites)
      throw ConfigError("build_hamiltonian: pair indices must satisfy 0 <= i < j < n");
    const auto& c = pc.c;
    if (c.j != 0.0)
      h += c.j * detail::two_site(pauli::x(), pc.i, pauli::x(), pc.j, n_sites);
    if (c.k != 0.0)
      h += c.k * detail::two_site(pauli::y(), pc.i, pauli::y(), pc.j, n_sites);
    if (c.l != 0.0) {
      h += c.l * detail::two_site(pauli::x(), pc.i, pauli::y(), pc.j, n_sites);
      h += c.l * detail::two_site(pauli::y(), pc.i, pauli::x(), pc.j, n_sites);
    }
    if (c.m != 0.0)
      h += c.m * detail::two_site(pauli::z(), pc.i, pauli::z(), pc.j, n_sites);
  }
  return HermitianOperator(std::move(h), std::move(unit));
}

// --- two-site model vs full 16-dim propagation ---------------------------------------

struct ModelDeviation {
  double max_distance = 0.0;  // phase-aligned, over the hold window
  std::vector<double> distances;
  std::vector<double> times;
};

// Propagates the dressed two-qubit model exp(-i J XX t) against the full
// 16-dim dynamics during the frozen hold, restricted to the {D, e}^x2
// subspace, and reports the worst phase-aligned state distance.
inline ModelDeviation model_vs_full(const GateScenario& sc, int samples = 32) {
  sc.validate();
  const double a0 = sc.alpha0();
  const auto v = dipole_dipole_operator(sc.dipoles(), sc.u_dd(), sc.form);
  const Matrix h1 = rwa_hamiltonian(sc.eps_e_hold, sc.delta_p(), sc.delta_s(),
                                    Complex(std::sin(a0)), Complex(std::cos(a0)))
                        .entries;
  const Matrix i4 = Matrix::Identity(4, 4);
  const Matrix h_full = kron(h1, i4) + kron(i4, h1) + v.entries;
  Matrix p(16, 4);
  {
    const Vector d = dark_state4(a0, sc.beta), e = bare_e4();
    p.col(0) = kron(d, d);
    p.col(1) = kron(d, e);
    p.col(2) = kron(e, d);
    p.col(3) = kron(e, e);
  }

  std::vector<PairCoupling> pairs(1);
  pairs[0].i = 0;
  pairs[0].j = 1;
  pairs[0].c.j = sc.j;
  // b_i = eps_e/2 multiplies Z with +1 on |e>; the embedding order puts |D>
  // at bit 0, so the field enters with a flipped sign here.
  const double b = -0.5 * sc.eps_e_hold;
  const Matrix h_model = build_hamiltonian(2, pairs, {b, b}).entries;

  Vector in2 = Vector::Zero(4);
  in2(0) = 1.0;  // |DD>
  Vector full = p * in2;

  ModelDeviation out;
  const double tau = sc.hold_duration();
  double t_prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double t = tau * k / samples;
    if (k > 0) full = expm_i_hermitian(h_full, t - t_prev) * full;
    t_prev = t;
    const Vector model = expm_i_hermitian(h_model, t) * in2;
    const Vector restricted = p.adjoint() * full;
    const double dist = state_distance(model, restricted);
    out.times.push_back(t);
    out.distances.push_back(dist);
    out.max_distance = std::max(out.max_distance, dist);
  }
  return out;
}

}  // namespace molgate
