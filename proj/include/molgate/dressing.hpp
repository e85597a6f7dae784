#pragma once

// Rotating-frame one-molecule dynamics: the driven 4-level RWA Hamiltonian
// over {g, g', f, e}, Gaussian STIRAP pulse schedules with a frozen hold
// window, and the dark/bright dressed eigensystem.
//
// Rabi convention: Omega = d E / hbar is the full Rabi frequency; the
// Hamiltonian carries coupling elements Omega/2, so the quasi-energies obey
// 2 eps_pm = Delta_p +/- sqrt(Delta_p^2 + Omega_p^2 + Omega_s^2) at two-photon
// resonance and the dark/bright gap is sqrt(Omega_p^2 + Omega_s^2)/2.

#include <cmath>
#include <vector>

#include "molgate/errors.hpp"
#include "molgate/linalg.hpp"
#include "molgate/propagate.hpp"

namespace molgate {

// Basis ordering of the rotating-frame one-molecule space.
enum RwaLevel : int { kG = 0, kGp = 1, kF = 2, kE = 3 };

inline HermitianOperator rwa_hamiltonian(double eps_e, double delta_p,
                                         double delta_s, Complex omega_p,
                                         Complex omega_s) {
  Matrix h = Matrix::Zero(4, 4);
  h(kGp, kGp) = delta_p - delta_s;
  h(kF, kF) = delta_p;
  h(kE, kE) = eps_e;
  // Phase convention: (Omega*/2)|f><g| + H.c., which makes the dark state
  // cos(a)|g> - e^{-i beta} sin(a)|g'> with beta = phi_p - phi_s.
  h(kF, kG) = 0.5 * std::conj(omega_p);
  h(kG, kF) = 0.5 * omega_p;
  h(kF, kGp) = 0.5 * std::conj(omega_s);
  h(kGp, kF) = 0.5 * omega_s;
  return HermitianOperator(std::move(h));
}

// Delayed Gaussian pulse pair with the Stokes pulse preceding the pump
// (tau_s = -tau/2, tau_p = +tau/2 around the ramp midpoint t = 0), frozen at
// their t0 values inside the hold window [t0, t1], and mirrored in time after
// t1. Detunings are held constant.
struct PulseSchedule {
  double omega0 = 1.0;
  double t0_width = 1.0;  // Gaussian width T0
  double tau_p = 0.0;
  double tau_s = 0.0;
  double hold_start = 0.0;  // t0
  double hold_end = 0.0;    // t1
  double beta = 0.0;        // relative laser phase phi_p - phi_s
  double delta_p = 0.0;
  double delta_s = 0.0;
  double start_margin = 3.0;  // protocol starts at tau_s - margin*T0

  double tau() const { return tau_p - tau_s; }
  double adiabaticity() const { return omega0 * t0_width; }
  bool adiabaticity_warning() const { return adiabaticity() < 10.0; }

  double t_start() const { return tau_s - start_margin * t0_width; }
  double t_end() const { return hold_end + (hold_start - t_start()); }

  // Map protocol time onto the forward ramp: identity before the hold,
  // frozen inside it, mirrored after it.
  double ramp_time(double t) const {
    if (t <= hold_start) return t;
    if (t <= hold_end) return hold_start;
    return hold_start - (t - hold_end);
  }

  double envelope_p(double t) const {
    const double u = (ramp_time(t) - tau_p) / t0_width;
    return omega0 * std::exp(-0.5 * u * u);
  }

  double envelope_s(double t) const {
    const double u = (ramp_time(t) - tau_s) / t0_width;
    return omega0 * std::exp(-0.5 * u * u);
  }

  Complex omega_p(double t) const {
    return envelope_p(t) * std::exp(Complex(0.0, beta));
  }

  Complex omega_s(double t) const { return Complex(envelope_s(t), 0.0); }

  // alpha(t) = atan(Omega_p/Omega_s); evaluated through the exponent
  // difference so it stays finite when both envelopes underflow.
  double mixing_angle(double t) const {
    const double tr = ramp_time(t);
    const double log_ratio =
        ((tr - tau_s) * (tr - tau_s) - (tr - tau_p) * (tr - tau_p)) /
        (2.0 * t0_width * t0_width);
    return std::atan(std::exp(log_ratio));
  }

  double sin_alpha0() const { return std::sin(mixing_angle(hold_start)); }
};

// Hold-start criterion: either a fixed mixing-angle target (default,
// sin(alpha0) = 0.995) or an explicitly given t0.
struct StirapOptions {
  double sin_alpha0_target = 0.995;
  bool use_fixed_t0 = false;
  double fixed_t0 = 0.0;
  double start_margin = 3.0;
};

inline PulseSchedule stirap_schedule(double omega0, double t0_width,
                                     double tau, double hold_duration,
                                     double beta, StirapOptions opts = {}) {
  if (omega0 <= 0.0 || t0_width <= 0.0)
    throw ConfigError("stirap_schedule: Omega0 and T0 must be positive");
  if (tau < 0.0)
    throw ConfigError("stirap_schedule: tau must be >= 0 (Stokes precedes pump)");
  if (hold_duration < 0.0)
    throw ConfigError("stirap_schedule: negative hold duration");

  PulseSchedule s;
  s.omega0 = omega0;
  s.t0_width = t0_width;
  s.tau_p = 0.5 * tau;
  s.tau_s = -0.5 * tau;
  s.beta = beta;
  s.start_margin = opts.start_margin;
  if (opts.use_fixed_t0) {
    s.hold_start = opts.fixed_t0;
  } else {
    if (tau == 0.0)
      throw ConfigError(
          "stirap_schedule: mixing-angle target needs tau > 0 (alpha is constant otherwise)");
    const double sa = opts.sin_alpha0_target;
    if (sa <= 0.0 || sa >= 1.0)
      throw ConfigError("stirap_schedule: sin(alpha0) target must be in (0, 1)");
    // tan(alpha(t)) = exp(tau t / T0^2) for equal-width Gaussians.
    const double tan_a0 = sa / std::sqrt(1.0 - sa * sa);
    s.hold_start = (t0_width * t0_width / tau) * std::log(tan_a0);
  }
  s.hold_end = s.hold_start + hold_duration;
  return s;
}

// One-molecule rotating-frame generator for a pulse schedule.
inline HamiltonianFn rwa_generator(const PulseSchedule& s, double eps_e) {
  return [s, eps_e](double t) {
    return rwa_hamiltonian(eps_e, s.delta_p, s.delta_s, s.omega_p(t),
                           s.omega_s(t))
        .entries;
  };
}

// --- dressed eigensystem ------------------------------------------------------

struct DressedBasis {
  Vector d, b_plus, b_minus;  // kets over {g, g', f}
  double alpha = 0.0;
  double beta = 0.0;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
};

// Dark state over the 4-level space, |D> = cos(a)|g> - e^{-i beta} sin(a)|g'>.
inline Vector dark_state4(double alpha, double beta) {
  Vector d = Vector::Zero(4);
  d(kG) = std::cos(alpha);
  d(kGp) = -std::exp(Complex(0.0, -beta)) * std::sin(alpha);
  return d;
}

inline Vector bare_e4() {
  Vector e = Vector::Zero(4);
  e(kE) = 1.0;
  return e;
}

inline DressedBasis dressed_basis(double delta_p, double delta_s,
                                  Complex omega_p, Complex omega_s) {
  const double wp = std::abs(omega_p), ws = std::abs(omega_s);
  const double w = std::sqrt(wp * wp + ws * ws);
  DressedBasis out;
  out.alpha = std::atan2(wp, ws);
  out.beta = std::arg(omega_p) - std::arg(omega_s);
  const double scale = std::max({w, std::abs(delta_p), std::abs(delta_s)});
  const bool resonant = std::abs(delta_p - delta_s) <= 1e-12 * std::max(scale, 1.0);

  if (resonant && std::abs(delta_p) <= 1e-12 * std::max(scale, 1.0)) {
    // Closed forms at one- and two-photon resonance.
    const double sa = std::sin(out.alpha), ca = std::cos(out.alpha);
    const Complex php = std::exp(Complex(0.0, std::arg(omega_p)));
    const Complex phs = std::exp(Complex(0.0, std::arg(omega_s)));
    out.d = Vector::Zero(3);
    out.d(kG) = ca;
    out.d(kGp) = -std::exp(Complex(0.0, -out.beta)) * sa;
    out.b_plus = Vector::Zero(3);
    out.b_plus(kG) = sa * php / std::sqrt(2.0);
    out.b_plus(kGp) = ca * phs / std::sqrt(2.0);
    out.b_plus(kF) = 1.0 / std::sqrt(2.0);
    out.b_minus = Vector::Zero(3);
    out.b_minus(kG) = sa * php / std::sqrt(2.0);
    out.b_minus(kGp) = ca * phs / std::sqrt(2.0);
    out.b_minus(kF) = -1.0 / std::sqrt(2.0);
    out.eps_plus = 0.5 * w;
    out.eps_minus = -0.5 * w;
    return out;
  }

  // Numeric branch: diagonalize the Lambda block.
  Matrix h3 = Matrix::Zero(3, 3);
  h3(kGp, kGp) = delta_p - delta_s;
  h3(kF, kF) = delta_p;
  h3(kF, kG) = 0.5 * std::conj(omega_p);
  h3(kG, kF) = 0.5 * omega_p;
  h3(kF, kGp) = 0.5 * std::conj(omega_s);
  h3(kGp, kF) = 0.5 * omega_s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h3);
  // The dark-like state is the eigenvector closest to the resonant dark form.
  Vector d_ref = Vector::Zero(3);
  d_ref(kG) = std::cos(out.alpha);
  d_ref(kGp) = -std::exp(Complex(0.0, -out.beta)) * std::sin(out.alpha);
  int dark_idx = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double ov = std::abs(d_ref.dot(es.eigenvectors().col(k)));
    if (ov > best) {
      best = ov;
      dark_idx = k;
    }
  }
  std::vector<int> rest;
  for (int k = 0; k < 3; ++k)
    if (k != dark_idx) rest.push_back(k);
  const int plus = es.eigenvalues()(rest[0]) > es.eigenvalues()(rest[1])
                       ? rest[0]
                       : rest[1];
  const int minus = plus == rest[0] ? rest[1] : rest[0];
  out.d = fix_phase(es.eigenvectors().col(dark_idx));
  out.b_plus = fix_phase(es.eigenvectors().col(plus));
  out.b_minus = fix_phase(es.eigenvectors().col(minus));
  out.eps_plus = es.eigenvalues()(plus);
  out.eps_minus = es.eigenvalues()(minus);
  return out;
}

// --- single-molecule STIRAP run (CLI `stirap`) ---------------------------------

struct StirapPoint {
  double t;
  double pop_g, pop_gp, pop_f, pop_e;
  double mixing_angle;
};

inline std::vector<double> protocol_grid(const PulseSchedule& s,
                                         int samples_per_segment) {
  // Segment boundaries exactly at t_i, t0, t1, t_f.
  std::vector<double> grid;
  const double marks[4] = {s.t_start(), s.hold_start, s.hold_end, s.t_end()};
  for (int seg = 0; seg < 3; ++seg) {
    if (marks[seg + 1] <= marks[seg]) continue;  // zero-length hold
    for (int k = 0; k < samples_per_segment; ++k) {
      const double x = static_cast<double>(k) / samples_per_segment;
      grid.push_back(marks[seg] + x * (marks[seg + 1] - marks[seg]));
    }
  }
  grid.push_back(marks[3]);
  return grid;
}

inline std::vector<StirapPoint> run_stirap(const PulseSchedule& s,
                                           double eps_e = 0.0,
                                           int samples_per_segment = 60,
                                           PropagatorSettings settings = {}) {
  Vector psi0 = Vector::Zero(4);
  psi0(kG) = 1.0;
  const auto grid = protocol_grid(s, samples_per_segment);
  if (settings.dt <= 0.0) settings.dt = 0.05 / s.omega0;
  const auto traj = propagate(rwa_generator(s, eps_e), psi0, grid, settings);
  std::vector<StirapPoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector& p = traj[i];
    out.push_back({grid[i], std::norm(p(kG)), std::norm(p(kGp)),
                   std::norm(p(kF)), std::norm(p(kE)),
                   s.mixing_angle(grid[i])});
  }
  return out;
}

}  // namespace molgate
