#pragma once

// Two-molecule gate engine. The pair evolves under
//
//   H(t) = h(t) x 1 + 1 x h(t) + V,   V = U_dd(Theta) D0 x D0,
//
// with h(t) the one-molecule rotating-frame Hamiltonian of dressing.hpp and
// D0 the q = 0 dimensionless dipole over {g, g', f, e}. The protocol is
// STIRAP ramp -> frozen hold of duration tau_e = pi/4J -> mirrored ramp;
// during the hold the dressed pair {|D>, |e>}^x2 exchanges excitation at the
// rate J = U_dd (d_eg' sin alpha0)^2, implementing exp(-i J X1X2 tau_e).
//
// Gate runs work in reduced units with the peak Rabi frequency Omega0 = 1;
// times are in 1/Omega0 and energies in Omega0. U_dd is calibrated from the
// requested coupling so that J is exactly the effective hold-window exchange
// rate. Fidelities are amplitude overlaps F = |<target|psi>|.

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "molgate/dressing.hpp"
#include "molgate/errors.hpp"
#include "molgate/linalg.hpp"
#include "molgate/matchgate.hpp"
#include "molgate/molecule.hpp"
#include "molgate/propagate.hpp"
#include "molgate/units.hpp"

namespace molgate {

struct PairGeometry {
  double r_m = 500e-9;
  double theta = units::pi / 2;  // angle between quantization axis and r_ij

  void validate() const {
    if (r_m <= 0.0) throw ConfigError("PairGeometry: r must be positive");
  }
};

inline double dd_angular(double theta) {
  const double c = std::cos(theta);
  return 1.0 - 3.0 * c * c;
}

// J = (1/3)(d^2/r^3)(1 - 3 cos^2 Theta)(1 - eta^2)(1 - delta^2), rad/s.
inline double coupling_J(double d_debye, double r_m, double theta, double eta,
                         double delta) {
  if (r_m <= 0.0) throw ConfigError("coupling_J: r must be positive");
  return (1.0 / 3.0) * units::dipole_dipole_rad_s(d_debye, r_m) *
         dd_angular(theta) * (1.0 - eta * eta) * (1.0 - delta * delta);
}

// --- dipole-dipole operator ----------------------------------------------------

enum class InteractionForm { TruncatedD0, Bare4Level };

inline InteractionForm interaction_form_from(const std::string& s) {
  if (s == "truncated-D0") return InteractionForm::TruncatedD0;
  if (s == "bare-4level") return InteractionForm::Bare4Level;
  throw ConfigError("unknown interaction form '" + s + "'");
}

// Magnitudes of the bare dimensionless dipole elements among the four
// dressed-protocol levels. d_eg' and d_g'f live in D0 (q = 0); d_ge and
// d_gf live in D_{+1} and only enter the suppression diagnostics.
struct EffectiveDipoles {
  double d_eg_prime = 1.0 / std::sqrt(3.0);
  double d_gp_f = 0.0;
  double d_ge = 0.0;
  double d_gf = 1.0 / std::sqrt(3.0);

  static EffectiveDipoles from_eta(double eta, double eta_prime) {
    const double a = 0.5 * eta * eta;
    const double b = 0.5 * eta_prime * eta_prime;
    EffectiveDipoles d;
    d.d_eg_prime = std::sqrt((1.0 - a) / 3.0);
    d.d_gp_f = std::sqrt(b / 3.0);
    d.d_ge = std::sqrt(a / 3.0);
    d.d_gf = std::sqrt((1.0 - b) / 3.0);
    return d;
  }

  static EffectiveDipoles from_table(const DipoleTable& t) {
    EffectiveDipoles d;
    d.d_eg_prime = std::abs(t(QubitIndex::E, QubitIndex::Gp, 0));
    d.d_gp_f = std::abs(t(QubitIndex::Gp, QubitIndex::F, 0));
    d.d_ge = std::abs(t(QubitIndex::G, QubitIndex::E, 1));
    d.d_gf = std::abs(t(QubitIndex::G, QubitIndex::F, 1));
    return d;
  }
};

// Single-molecule q = 0 dipole over {g, g', f, e}. TruncatedD0 keeps only
// the dominant e<->g' element; Bare4Level retains every q = 0 element (the
// sqrt(b)-suppressed g'<->f one as well).
inline Matrix d0_operator(const EffectiveDipoles& dip, InteractionForm form) {
  Matrix d0 = Matrix::Zero(4, 4);
  d0(kE, kGp) = dip.d_eg_prime;
  d0(kGp, kE) = dip.d_eg_prime;
  if (form == InteractionForm::Bare4Level) {
    d0(kGp, kF) = dip.d_gp_f;
    d0(kF, kGp) = dip.d_gp_f;
  }
  return d0;
}

// Dressed-frame magnitudes of the D_{+-1}-borne elements that the q = 0
// truncation drops; all vanish with cos(alpha) or the spin admixtures.
struct SuppressionDiagnostics {
  double d_de = 0.0;    // |d_De|   = cos(a) |d_ge|
  double d_pm_e = 0.0;  // |d_+-e|  = sin(a) |d_ge| / sqrt(2)
  double d_d_pm = 0.0;  // |d_D+-|  = cos(a) |d_gf| / sqrt(2)  (~ delta d_gf/sqrt(2))
  double d_pm = 0.0;    // |d_+-|   = sin(a) |d_gf| / 2
};

inline SuppressionDiagnostics suppressed_elements(const EffectiveDipoles& dip,
                                                  double alpha) {
  SuppressionDiagnostics s;
  s.d_de = std::cos(alpha) * dip.d_ge;
  s.d_pm_e = std::sin(alpha) * dip.d_ge / std::sqrt(2.0);
  s.d_d_pm = std::cos(alpha) * dip.d_gf / std::sqrt(2.0);
  s.d_pm = std::sin(alpha) * dip.d_gf / 2.0;
  return s;
}

inline HermitianOperator dipole_dipole_operator(const EffectiveDipoles& dip,
                                                double u_dd,
                                                InteractionForm form,
                                                std::string unit = "rad/s") {
  const Matrix d0 = d0_operator(dip, form);
  return HermitianOperator(u_dd * kron(d0, d0), std::move(unit));
}

// Physical route: dipole elements taken from the molecular eigenstates.
inline HermitianOperator dipole_dipole_operator(const QubitStates& states,
                                                const SpinRotBasis& basis,
                                                const MoleculeParams& params,
                                                const PairGeometry& geometry,
                                                InteractionForm form) {
  geometry.validate();
  const double u_dd = units::dipole_dipole_rad_s(params.d_debye, geometry.r_m) *
                      dd_angular(geometry.theta);
  const auto dip = EffectiveDipoles::from_table(dipole_matrix_elements(states, basis));
  return dipole_dipole_operator(dip, u_dd, form);
}

// --- gate scenario ----------------------------------------------------------------

struct GateScenario {
  // Pulse geometry, reduced units (Omega0 = 1).
  double t0_width = 20.0;  // T0 Omega0
  double tau = 40.0;       // pulse delay tau Omega0
  double sin_alpha0 = 0.995;
  double beta = 0.0;
  double delta_sum = 0.0;   // (Delta_p + Delta_s)/Omega0
  double delta_diff = 0.0;  // (Delta_p - Delta_s)/Omega0
  double start_margin = 3.0;

  // Interaction. j is the effective hold-window exchange rate in units of
  // Omega0; the reference J T0 = 0.02 at T0 = 20 gives j = 1e-3.
  double j = 1e-3;
  double tau_e = -1.0;  // entangling hold; < 0 means pi/(4 j)
  double eta = 0.0;
  double eta_prime = -1.0;  // < 0 means equal to eta
  InteractionForm form = InteractionForm::TruncatedD0;

  // eps_e during the dressed window (step ii keeps the gap closed; a scan
  // hook for robustness studies).
  double eps_e_hold = 0.0;

  // Input: a label over {g,e}x{g,e} or an explicit 16-dim ket.
  std::string input_state = "gg";
  std::optional<Vector> input_ket;

  // Skip the ramps and start at t0 in the dressed input (ideal-transfer
  // limit); the hold couplings are then Omega_p = sin(a0), Omega_s = cos(a0).
  bool instantaneous_transfer = false;

  // Integrator.
  double dt = 0.025;
  Stepper stepper = Stepper::Magnus4;

  double delta_p() const { return 0.5 * (delta_sum + delta_diff); }
  double delta_s() const { return 0.5 * (delta_sum - delta_diff); }
  double hold_duration() const {
    return tau_e > 0.0 ? tau_e : units::pi / (4.0 * j);
  }
  double alpha0() const {
    return sin_alpha0 >= 1.0 ? units::pi / 2 : std::asin(sin_alpha0);
  }
  double stirap_residual() const { return units::pi / 2 - alpha0(); }  // delta

  void validate() const {
    if (t0_width <= 0.0 || tau < 0.0)
      throw ConfigError("GateScenario: T0 must be positive and tau >= 0");
    if (sin_alpha0 <= 0.0 || sin_alpha0 > 1.0)
      throw ConfigError("GateScenario: sin_alpha0 must be in (0, 1]");
    if (j == 0.0) throw ConfigError("GateScenario: j must be nonzero");
    if (hold_duration() <= 0.0)
      throw ConfigError("GateScenario: tau_e must be positive");
    if (!instantaneous_transfer && sin_alpha0 >= 1.0)
      throw ConfigError(
          "GateScenario: sin_alpha0 = 1 is reachable only with instantaneous transfer");
    if (input_ket && input_ket->size() != 16)
      throw ConfigError("GateScenario: explicit input ket must have dimension 16");
    if (!input_ket && input_state != "gg" && input_state != "ge" &&
        input_state != "eg" && input_state != "ee")
      throw ConfigError("GateScenario: input label must be one of gg, ge, eg, ee");
  }

  EffectiveDipoles dipoles() const {
    return EffectiveDipoles::from_eta(eta, eta_prime < 0.0 ? eta : eta_prime);
  }

  // U_dd calibrated so the hold-window exchange rate is exactly j.
  double u_dd() const {
    const double d_ed = dipoles().d_eg_prime * sin_alpha0;
    return j / (d_ed * d_ed);
  }
};

// --- protocol -----------------------------------------------------------------------

struct PairTrajectoryPoint {
  double t;
  double pop_gg, pop_gpgp, pop_ee, pop_ff;
  double pop_dressed_qubit;  // weight inside {D, e}^x2
  double pop_comp;           // weight inside {g, e}^x2
};

struct ProtocolResult {
  double f_rot = 0.0;   // at t1, vs exp(-i J XX tau_e) acting on the dressed input
  double f_comp = 0.0;  // at t_f, vs the same gate in the computational basis
  double leakage = 0.0; // population outside {g,e}^x2 at t_f
  double final_norm = 0.0;
  double j = 0.0;
  double tau_e = 0.0;
  double sin_alpha0 = 0.0;
  double t_i = 0.0, t0 = 0.0, t1 = 0.0, t_f = 0.0;
  SuppressionDiagnostics suppressed;  // dropped D_{+-1}-borne elements at alpha0
  std::vector<PairTrajectoryPoint> trajectory;
};

namespace detail {

inline Vector basis4(int idx) {
  Vector v = Vector::Zero(4);
  v(idx) = 1.0;
  return v;
}

// 16x4 embedding with columns |ab> for a,b running over the given
// single-molecule kets (qubit ordering 00, 01, 10, 11 with 0 = first ket).
inline Matrix embed_pair(const Vector& zero, const Vector& one) {
  Matrix p(16, 4);
  p.col(0) = kron(zero, zero);
  p.col(1) = kron(zero, one);
  p.col(2) = kron(one, zero);
  p.col(3) = kron(one, one);
  return p;
}

inline Vector two_qubit_label(const std::string& label) {
  Vector v = Vector::Zero(4);
  const int a = label[0] == 'e' ? 1 : 0;
  const int b = label[1] == 'e' ? 1 : 0;
  v(2 * a + b) = 1.0;
  return v;
}

}  // namespace detail

// Restriction of the frozen-hold pair propagator to the dressed qubit
// subspace {D, e}^x2; equals exp(-i J XX tau) in the ideal limit.
inline Matrix hold_propagator_restricted(const GateScenario& sc) {
  sc.validate();
  const double a0 = sc.alpha0();
  const auto v = dipole_dipole_operator(sc.dipoles(), sc.u_dd(), sc.form);
  const Matrix h1 = rwa_hamiltonian(sc.eps_e_hold, sc.delta_p(), sc.delta_s(),
                                    Complex(std::sin(a0)), Complex(std::cos(a0)))
                        .entries;
  const Matrix i4 = Matrix::Identity(4, 4);
  const Matrix h = kron(h1, i4) + kron(i4, h1) + v.entries;
  const Matrix u16 = expm_i_hermitian(h, sc.hold_duration());
  const Matrix p = detail::embed_pair(dark_state4(a0, sc.beta), bare_e4());
  return p.adjoint() * u16 * p;
}

inline ProtocolResult run_protocol(const GateScenario& sc,
                                   int trajectory_samples = 0) {
  sc.validate();
  ProtocolResult out;
  out.j = sc.j;
  out.tau_e = sc.hold_duration();
  out.sin_alpha0 = sc.sin_alpha0;

  const double a0 = sc.alpha0();
  out.suppressed = suppressed_elements(sc.dipoles(), a0);
  const auto v = dipole_dipole_operator(sc.dipoles(), sc.u_dd(), sc.form);
  const Matrix i4 = Matrix::Identity(4, 4);

  // Two-qubit input and analytic targets: the gate target is built by
  // applying exp(-i J XX tau_e) to the labeled input, never hard-coded.
  Vector in2;
  Vector psi0;
  const Matrix p_rot = detail::embed_pair(dark_state4(a0, sc.beta), bare_e4());
  const Matrix p_comp = detail::embed_pair(detail::basis4(kG), detail::basis4(kE));
  if (sc.input_ket) {
    psi0 = *sc.input_ket;
    psi0.normalize();
    in2 = p_comp.adjoint() * psi0;
    const double inside = in2.norm();
    if (inside < 1.0 - 1e-9)
      throw ConfigError("explicit input ket must lie in the computational subspace");
    in2.normalize();
  } else {
    in2 = detail::two_qubit_label(sc.input_state);
    psi0 = p_comp * in2;
  }
  const Matrix u2 = xx_gate(sc.j, out.tau_e).entries;
  const Vector target_rot = p_rot * (u2 * in2);
  const Vector target_comp = p_comp * (u2 * in2);

  auto record = [&](std::vector<double>& ts, std::vector<Vector>& psis,
                    double t, const Vector& psi) {
    ts.push_back(t);
    psis.push_back(psi);
  };
  std::vector<double> ts;
  std::vector<Vector> psis;

  if (sc.instantaneous_transfer) {
    // Hold only, starting from the dressed input.
    const Matrix h1 = rwa_hamiltonian(sc.eps_e_hold, sc.delta_p(), sc.delta_s(),
                                      Complex(std::sin(a0)), Complex(std::cos(a0)))
                          .entries;
    const Matrix h = kron(h1, i4) + kron(i4, h1) + v.entries;
    out.t_i = out.t0 = 0.0;
    out.t1 = out.t_f = out.tau_e;
    Vector psi = p_rot * in2;
    record(ts, psis, 0.0, psi);
    const int samples = std::max(1, trajectory_samples);
    for (int k = 1; k <= samples; ++k) {
      const double t_next = out.tau_e * k / samples;
      psi = expm_i_hermitian(h, t_next - ts.back()) * psi;
      record(ts, psis, t_next, psi);
    }
    out.f_rot = fidelity(psis.back(), target_rot);
    out.f_comp = out.f_rot;  // dressed labels are the qubit labels here
    out.leakage = 1.0 - (p_rot.adjoint() * psis.back()).squaredNorm();
    out.final_norm = psis.back().norm();
  } else {
    auto schedule = stirap_schedule(
        1.0, sc.t0_width, sc.tau, out.tau_e, sc.beta,
        {.sin_alpha0_target = sc.sin_alpha0, .start_margin = sc.start_margin});
    schedule.delta_p = sc.delta_p();
    schedule.delta_s = sc.delta_s();
    out.t_i = schedule.t_start();
    out.t0 = schedule.hold_start;
    out.t1 = schedule.hold_end;
    out.t_f = schedule.t_end();

    const auto h1_fn = rwa_generator(schedule, sc.eps_e_hold);
    auto h_fn = [&](double t) {
      const Matrix h1 = h1_fn(t);
      return (kron(h1, i4) + kron(i4, h1) + v.entries).eval();
    };

    Vector psi = psi0;
    record(ts, psis, out.t_i, psi);
    const int ramp_samples = trajectory_samples > 0 ? trajectory_samples : 1;

    // Forward ramp.
    for (int k = 1; k <= ramp_samples; ++k) {
      const double t_prev = ts.back();
      const double t_next = out.t_i + (out.t0 - out.t_i) * k / ramp_samples;
      const int n = std::max(1, static_cast<int>(std::ceil((t_next - t_prev) / sc.dt)));
      psi = propagate_interval(h_fn, psi, t_prev, t_next, n, sc.stepper);
      record(ts, psis, t_next, psi);
    }
    // Hold: the generator is constant, one exact step per sample.
    const Matrix h_hold = h_fn(0.5 * (out.t0 + out.t1));
    for (int k = 1; k <= ramp_samples; ++k) {
      const double t_next = out.t0 + (out.t1 - out.t0) * k / ramp_samples;
      psi = expm_i_hermitian(h_hold, t_next - ts.back()) * psi;
      record(ts, psis, t_next, psi);
    }
    out.f_rot = fidelity(psi, target_rot);
    // Mirrored ramp.
    for (int k = 1; k <= ramp_samples; ++k) {
      const double t_prev = ts.back();
      const double t_next = out.t1 + (out.t_f - out.t1) * k / ramp_samples;
      const int n = std::max(1, static_cast<int>(std::ceil((t_next - t_prev) / sc.dt)));
      psi = propagate_interval(h_fn, psi, t_prev, t_next, n, sc.stepper);
      record(ts, psis, t_next, psi);
    }
    out.f_comp = fidelity(psi, target_comp);
    out.leakage = 1.0 - (p_comp.adjoint() * psi).squaredNorm();
    out.final_norm = psi.norm();
  }

  if (trajectory_samples > 0) {
    const Matrix pc = p_comp;
    const Matrix pr = p_rot;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Vector& psi = psis[i];
      PairTrajectoryPoint pt;
      pt.t = ts[i];
      pt.pop_gg = std::norm(psi(kG * 4 + kG));
      pt.pop_gpgp = std::norm(psi(kGp * 4 + kGp));
      pt.pop_ee = std::norm(psi(kE * 4 + kE));
      double ff = 0.0;
      for (int x = 0; x < 4; ++x) {
        ff += std::norm(psi(kF * 4 + x));
        if (x != kF) ff += std::norm(psi(x * 4 + kF));
      }
      pt.pop_ff = ff;
      pt.pop_dressed_qubit = (pr.adjoint() * psi).squaredNorm();
      pt.pop_comp = (pc.adjoint() * psi).squaredNorm();
      out.trajectory.push_back(pt);
    }
  }
  return out;
}

// --- fidelity maps ------------------------------------------------------------------

struct AxisSpec {
  std::string name;
  std::vector<double> values;

  static AxisSpec linspace(std::string name, double lo, double hi, int n) {
    if (n < 1) throw ConfigError("AxisSpec: need at least one grid point");
    AxisSpec a{std::move(name), {}};
    a.values.reserve(n);
    for (int i = 0; i < n; ++i)
      a.values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
    return a;
  }
};

inline void apply_axis(GateScenario& sc, const std::string& name, double value) {
  if (name == "delta_diff") sc.delta_diff = value;
  else if (name == "delta_sum") sc.delta_sum = value;
  else if (name == "tau") sc.tau = value;
  else if (name == "t0_width") sc.t0_width = value;
  else if (name == "j") sc.j = value;
  else if (name == "eps_e_hold") sc.eps_e_hold = value;
  else if (name == "beta") sc.beta = value;
  else if (name == "sin_alpha0") sc.sin_alpha0 = value;
  else throw ConfigError("unknown sweep axis '" + name + "'");
}

enum class FidelityKind { Rotating, Computational };

struct SweepMetadata {
  std::map<std::string, double> scenario_summary;
  std::string fidelity_kind;
  int workers = 1;
  std::vector<std::pair<int, int>> failed_cells;
  std::vector<std::string> errors;
};

struct FidelityMap {
  AxisSpec axis1, axis2;
  Eigen::MatrixXd fidelity;  // axis1 along rows, axis2 along columns
  Eigen::MatrixXd leakage;
  SweepMetadata meta;
};

inline SweepMetadata summarize(const GateScenario& sc, FidelityKind kind,
                               int workers) {
  SweepMetadata m;
  m.scenario_summary = {
      {"t0_width", sc.t0_width},
      {"tau", sc.tau},
      {"sin_alpha0", sc.sin_alpha0},
      {"beta", sc.beta},
      {"delta_sum", sc.delta_sum},
      {"delta_diff", sc.delta_diff},
      {"j", sc.j},
      {"tau_e", sc.hold_duration()},
      {"eps_e_hold", sc.eps_e_hold},
      {"eta", sc.eta},
      {"dt", sc.dt},
      {"start_margin", sc.start_margin},
      {"form", sc.form == InteractionForm::TruncatedD0 ? 0.0 : 1.0},
      {"stepper", sc.stepper == Stepper::Magnus4 ? 0.0 : 1.0},
  };
  m.fidelity_kind = kind == FidelityKind::Rotating ? "rotating" : "computational";
  m.workers = workers;
  return m;
}

// One run_protocol per grid cell, distributed over a worker pool. Cells are
// independent and each result slot has a single writer, so the output is
// bit-identical for any worker count. Failed cells become NaN sentinels and
// are listed in the metadata instead of aborting the scan.
inline FidelityMap sweep(const GateScenario& base, const AxisSpec& axis1,
                         const AxisSpec& axis2, int workers = 1,
                         FidelityKind kind = FidelityKind::Rotating) {
  if (axis1.values.empty() || axis2.values.empty())
    throw ConfigError("sweep: axes must be nonempty");
  {
    GateScenario scratch = base;  // unknown axis names fail before any work
    apply_axis(scratch, axis1.name, axis1.values.front());
    apply_axis(scratch, axis2.name, axis2.values.front());
  }
  if (workers < 1) workers = 1;
  const int n1 = static_cast<int>(axis1.values.size());
  const int n2 = static_cast<int>(axis2.values.size());

  FidelityMap map;
  map.axis1 = axis1;
  map.axis2 = axis2;
  map.fidelity.setConstant(n1, n2, std::nan(""));
  map.leakage.setConstant(n1, n2, std::nan(""));
  map.meta = summarize(base, kind, workers);

  std::atomic<int> next{0};
  std::mutex err_mutex;
  auto work = [&]() {
    for (;;) {
      const int cell = next.fetch_add(1);
      if (cell >= n1 * n2) return;
      const int i = cell / n2, j = cell % n2;
      GateScenario sc = base;
      try {
        apply_axis(sc, axis1.name, axis1.values[i]);
        apply_axis(sc, axis2.name, axis2.values[j]);
        const auto r = run_protocol(sc);
        map.fidelity(i, j) =
            kind == FidelityKind::Rotating ? r.f_rot : r.f_comp;
        map.leakage(i, j) = r.leakage;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        map.meta.failed_cells.emplace_back(i, j);
        map.meta.errors.emplace_back(e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return map;
}

}  // namespace molgate
