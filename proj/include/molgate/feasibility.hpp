#pragma once

// Experimental budget estimates: photon scattering off the strong near-IR
// beam, motional heating from its dipole force, adiabaticity margins, and
// the gate-time budget tau_e Gamma_sc.
//
// The scattering rate uses the tabulated cross-calibration Re(alpha) =
// 100 a0^3 <-> 4.6 Hz/(W/cm^2); the heating estimate exposes both the
// closed-form short-time coefficient gamma (gamma-1)^2 and an independent
// quadrature of the oscillator matrix element |<psi_2|exp(-x^2/sigma^2)|psi_0>|
// so the two can be compared (they differ by a constant factor, reported,
// not silently corrected).

#include <cmath>
#include <string>

#include "molgate/errors.hpp"
#include "molgate/molecule.hpp"
#include "molgate/pairgate.hpp"
#include "molgate/units.hpp"

namespace molgate {

// Gamma_sc = Im(alpha) I, with Im(alpha) as a polarizability volume in a0^3
// and I in W/cm^2; returns s^-1.
inline double scattering_rate(double im_alpha_a03, double intensity_w_cm2) {
  if (intensity_w_cm2 < 0.0)
    throw ConfigError("scattering_rate: intensity must be >= 0");
  return (im_alpha_a03 / 100.0) * units::alpha100a03_hz_per_w_cm2 *
         intensity_w_cm2;
}

struct HeatingResult {
  double gamma = 0.0;        // alpha / (alpha + beta), alpha = m w0/hbar, beta = 1/sigma^2
  double p_closed_form = 0.0;   // gamma (gamma-1)^2 A0^2 t^2
  double p_quadrature = 0.0;    // |A0 t <psi_2|e^{-x^2/sigma^2}|psi_0>|^2
  double coefficient_ratio = 0.0;  // quadrature / closed-form coefficient
  bool short_time_ok = true;       // omega0 t << 1 validity
};

// Transition probability |0> -> |2> of a trapped molecule under a suddenly
// applied Gaussian lightshift potential A0 exp(-x^2/sigma^2), to lowest
// order in time. a0_rad_s is the potential amplitude as an angular
// frequency; t in seconds.
inline HeatingResult heating_probability(double omega0_rad_s, double mass_kg,
                                         double sigma_m, double a0_rad_s,
                                         double t_s) {
  if (omega0_rad_s <= 0.0 || mass_kg <= 0.0 || sigma_m <= 0.0)
    throw ConfigError("heating_probability: omega0, mass, sigma must be positive");
  HeatingResult out;
  const double alpha = mass_kg * omega0_rad_s / units::hbar;  // 1/m^2
  const double beta = 1.0 / (sigma_m * sigma_m);
  out.gamma = alpha / (alpha + beta);
  const double at = a0_rad_s * t_s;
  out.p_closed_form = out.gamma * (out.gamma - 1.0) * (out.gamma - 1.0) * at * at;
  out.short_time_ok = omega0_rad_s * t_s < 1.0;

  // Quadrature oracle: psi_0, psi_2 harmonic-oscillator eigenfunctions,
  // overlap <psi_2| e^{-beta x^2} |psi_0> by composite Simpson integration.
  const double l0 = 1.0 / std::sqrt(alpha);
  const double span = 12.0 * l0;
  const int n = 4000;  // even
  const double h = 2.0 * span / n;
  auto integrand = [&](double x) {
    const double xi = x / l0;
    const double psi0 = std::pow(alpha / units::pi, 0.25) * std::exp(-0.5 * xi * xi);
    const double psi2 = std::pow(alpha / units::pi, 0.25) *
                        (2.0 * xi * xi - 1.0) / std::sqrt(2.0) *
                        std::exp(-0.5 * xi * xi);
    return psi2 * std::exp(-beta * x * x) * psi0;
  };
  double sum = integrand(-span) + integrand(span);
  for (int k = 1; k < n; ++k)
    sum += integrand(-span + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  const double overlap = sum * h / 3.0;
  out.p_quadrature = at * at * overlap * overlap;
  out.coefficient_ratio =
      out.p_closed_form > 0.0 ? out.p_quadrature / out.p_closed_form : 0.0;
  return out;
}

// --- aggregate budget ------------------------------------------------------------

struct BudgetInputs {
  MoleculeParams mol;
  double d_debye = 0.0;  // 0 -> use the species dipole
  double r_nm = 500.0;
  double theta = units::pi / 2;
  double eta = 0.01;
  double delta = 0.1;  // STIRAP residual |pi/2 - alpha0|

  double i_ls_w_cm2 = 1.0e5;  // near-IR intensity (1e2 kW/cm^2)
  double t0_s = 100e-9;       // mid-IR Gaussian ramp width
  double adiabaticity_threshold = 10.0;  // require Omega0 T0 >= this
  double d_vib_debye = 0.1;   // vibrational transition dipole for the mid-IR drive

  // Trap and beam, for the heating estimate (evaluated at t = tau_e).
  double trap_omega0_rad_s = 2.0 * units::pi * 1.5e5;
  double sigma_um = 2.0;
  double heating_a0_rad_s = 0.0;  // 0 -> lightshift of I_LS at delta_alpha

  // Microwave chirp for the ZZ extension; 0 disables the margin estimate.
  double omega_mu_rad_s = 0.0;
  double chirp_rate_rad_s2 = 0.0;
};

struct FeasibilityReport {
  double gamma_sc = 0.0;            // s^-1
  double one_over_gamma_sc = 0.0;   // s
  double j_rad_s = 0.0;             // species dipole (or override)
  double j_1debye_rad_s = 0.0;      // same geometry, d = 1 D reference
  double tau_e_s = 0.0;             // pi / 4J
  double tau_e_gamma = 0.0;         // tau_e * Gamma_sc
  bool gate_instantaneous = true;   // tau_e * Gamma_sc <= 0.01

  double omega0_required_rad_s = 0.0;  // adiabaticity_threshold / T0
  double omega0_required_mhz = 0.0;    // /2pi
  double i_mid_ir_w_cm2 = 0.0;         // intensity giving that Omega0 at d_vib
  double weak_line_penalty = 0.0;      // eta^-2 for the g'<->f line

  double u_ls_rad_s = 0.0;  // tensor lightshift at I_LS
  double l0_m = 0.0;        // trap length
  double l0_over_sigma = 0.0;
  HeatingResult heating;
  double chirp_margin = std::nan("");
};

inline FeasibilityReport budget(const BudgetInputs& in) {
  in.mol.validate();
  FeasibilityReport rep;
  const double im_alpha = in.mol.rho_im_over_re * in.mol.alpha_avg_a03;
  rep.gamma_sc = scattering_rate(im_alpha, in.i_ls_w_cm2);
  rep.one_over_gamma_sc = rep.gamma_sc > 0.0 ? 1.0 / rep.gamma_sc
                                             : std::numeric_limits<double>::infinity();

  const double d = in.d_debye > 0.0 ? in.d_debye : in.mol.d_debye;
  const double r_m = units::nm_to_m(in.r_nm);
  rep.j_rad_s = coupling_J(d, r_m, in.theta, in.eta, in.delta);
  rep.j_1debye_rad_s = coupling_J(1.0, r_m, in.theta, in.eta, in.delta);
  rep.tau_e_s = units::pi / (4.0 * std::abs(rep.j_rad_s));
  rep.tau_e_gamma = rep.tau_e_s * rep.gamma_sc;
  rep.gate_instantaneous = rep.tau_e_gamma <= 0.01;

  rep.omega0_required_rad_s = in.adiabaticity_threshold / in.t0_s;
  rep.omega0_required_mhz = rep.omega0_required_rad_s / (2.0 * units::pi * 1e6);
  // I = (hbar Omega0 / d_vib)^2 eps0 c / 2, in W/cm^2.
  {
    const double e_field =
        units::hbar * rep.omega0_required_rad_s / units::debye_to_cm(in.d_vib_debye);
    rep.i_mid_ir_w_cm2 =
        0.5 * units::epsilon0 * units::speed_of_light * e_field * e_field * 1e-4;
  }
  rep.weak_line_penalty = in.eta > 0.0 ? 1.0 / (in.eta * in.eta)
                                       : std::numeric_limits<double>::infinity();

  rep.u_ls_rad_s = units::lightshift_rad_per_s(in.mol.delta_alpha_a03, in.i_ls_w_cm2);
  const double mass = units::amu_to_kg(in.mol.mass_amu);
  rep.l0_m = units::trap_length_m(mass, in.trap_omega0_rad_s);
  const double sigma_m = in.sigma_um * 1e-6;
  rep.l0_over_sigma = rep.l0_m / sigma_m;
  const double a0 = in.heating_a0_rad_s > 0.0 ? in.heating_a0_rad_s : rep.u_ls_rad_s;
  rep.heating = heating_probability(in.trap_omega0_rad_s, mass, sigma_m, a0,
                                    rep.tau_e_s);
  // Linear chirp through resonance: the adiabaticity margin peaks at
  // Delta = 0 where it equals rate / (2 Omega_mu^2).
  if (in.omega_mu_rad_s > 0.0 && in.chirp_rate_rad_s2 > 0.0)
    rep.chirp_margin =
        in.chirp_rate_rad_s2 / (2.0 * in.omega_mu_rad_s * in.omega_mu_rad_s);
  return rep;
}

}  // namespace molgate
