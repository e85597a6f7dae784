// Acceptance suite: ten numbered criteria, each printed as a PASS/FAIL line
// with the measured values. Run all with no arguments or one with
// --criterion N. The process exit code is the number of failed criteria.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "molgate/config.hpp"
#include "molgate/feasibility.hpp"
#include "molgate/io.hpp"
#include "molgate/matchgate.hpp"
#include "molgate/molecule.hpp"
#include "molgate/pairgate.hpp"
#include "molgate/spinmodel.hpp"

using namespace molgate;

namespace {

struct Check {
  std::string what;
  bool pass;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

std::vector<Check>* g_checks = nullptr;
std::vector<std::string>* g_notes = nullptr;

void check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  g_checks->push_back({buf, ok});
}

void note(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  g_notes->push_back(buf);
}

const std::string kRegistry = std::string(MOLGATE_DATA_DIR) + "/species.registry";

GateScenario reference_scenario() {
  GateScenario sc;  // T0 = 20, tau = 40, sin a0 = 0.995, j = 0.02/T0
  sc.eta = 0.005;
  sc.dt = 0.1;
  return sc;
}

// --- criteria -------------------------------------------------------------------

// Crossing field: SrF registry constants at g_S = 2.0 reproduce 5376.2 G
// within 0.5%; the gamma_sr = 0 limit hits 2 B_e / (g_S mu_B) to 1e-9.
void criterion1() {
  const auto srf = registry_species(kRegistry, "SrF");
  const double b_cross = find_crossing(srf, 0.0);
  const double rel = std::abs(b_cross - 5376.2) / 5376.2;
  check(rel < 0.005, "SrF crossing %.2f G vs 5376.2 G (rel %.2e < 5e-3)",
        b_cross, rel);

  auto srf0 = srf;
  srf0.gamma_sr_rad_s = {0.0, 0.0};
  const double analytic =
      2.0 * srf.be_rad_s[0] / (srf.g_s * units::bohr_magneton_rad_s_per_gauss);
  const double b0 = find_crossing(srf0, 0.0);
  const double rel0 = std::abs(b0 - analytic) / analytic;
  check(rel0 < 1e-9, "gamma=0 limit %.6f G vs 2Be/(gS muB) (rel %.2e < 1e-9)",
        b0, rel0);
}

// Reference gate: computational fidelity in [0.99, 1], rotating-frame
// fidelity >= 0.99; the achieved values are recorded.
void criterion2() {
  const auto r = run_protocol(reference_scenario());
  check(r.f_comp >= 0.99 && r.f_comp <= 1.0,
        "F_comp = %.6f in [0.99, 1.0]", r.f_comp);
  check(r.f_rot >= 0.99, "F_rot = %.6f >= 0.99", r.f_rot);
  note("achieved: F_rot = %.6f, F_comp = %.6f, leakage = %.3e, "
       "tau_e = %.4f, sin(a0) = %.4f",
       r.f_rot, r.f_comp, r.leakage, r.tau_e, r.sin_alpha0);
}

// Two-photon-detuning map on the 41x41 grid: the |diff| <= 0.01 band is
// required to stay above 0.99 and the |diff| = 0.05 edge must sit within
// 0.02 of 1/sqrt(2).
void criterion3() {
  const auto base = reference_scenario();
  const auto a1 = AxisSpec::linspace("delta_diff", -0.05, 0.05, 41);
  const auto a2 = AxisSpec::linspace("delta_sum", -0.4, 0.4, 41);
  const auto map = sweep(base, a1, a2, 4, FidelityKind::Rotating);

  int band_cells = 0, band_ok = 0;
  double band_min = 1.0;
  int resonant_ok = 0, resonant_cells = 0;
  for (int i = 0; i < 41; ++i) {
    const double diff = map.axis1.values[i];
    if (std::abs(diff) > 0.01 + 1e-12) continue;
    for (int j = 0; j < 41; ++j) {
      ++band_cells;
      const double f = map.fidelity(i, j);
      band_min = std::min(band_min, f);
      if (f > 0.99) ++band_ok;
      if (std::abs(diff) < 1e-12) {
        ++resonant_cells;
        if (f > 0.99) ++resonant_ok;
      }
    }
  }
  check(band_ok == band_cells,
        "band |diff| <= 0.01: %d/%d cells above 0.99 (min %.4f)", band_ok,
        band_cells, band_min);
  note("the two-photon-resonant column passes %d/%d; at J tau_e = pi/4 "
       "with J = 0.02/T0 a detuning delta_2 dephases |DD> by "
       "2 delta_2 sin^2(a0) tau_e (15.5 rad at the band edge), so the "
       "off-resonant band cannot stay above 0.99",
       resonant_ok, resonant_cells);

  double worst_edge = 0.0;
  for (int i = 0; i < 41; ++i) {
    if (std::abs(std::abs(map.axis1.values[i]) - 0.05) > 1e-12) continue;
    for (int j = 0; j < 41; ++j)
      worst_edge = std::max(worst_edge,
                            std::abs(map.fidelity(i, j) - 1.0 / std::sqrt(2.0)));
  }
  check(worst_edge < 0.02,
        "edge |diff| = 0.05: max |F - 1/sqrt(2)| = %.4f < 0.02", worst_edge);
  check(map.meta.failed_cells.empty(), "no failed cells (%zu)",
        map.meta.failed_cells.size());
}

// Pulse-geometry map at zero detuning: a high-fidelity region exists and
// non-overlapping pulses fall below 1/sqrt(2).
void criterion4() {
  const auto base = reference_scenario();
  const auto a1 = AxisSpec::linspace("tau", 10.0, 110.0, 21);
  const auto a2 = AxisSpec::linspace("t0_width", 2.5, 42.5, 21);
  const auto map = sweep(base, a1, a2, 4, FidelityKind::Rotating);

  double best = 0.0;
  int nonoverlap_cells = 0, nonoverlap_low = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      best = std::max(best, map.fidelity(i, j));
      if (map.axis1.values[i] >= 6.0 * map.axis2.values[j]) {
        ++nonoverlap_cells;
        if (map.fidelity(i, j) < 1.0 / std::sqrt(2.0)) ++nonoverlap_low;
      }
    }
  check(best > 0.99, "high-fidelity region exists (max F = %.6f > 0.99)", best);
  check(nonoverlap_cells > 0 && nonoverlap_low > 0,
        "non-overlapping pulses (tau >= 6 T0) drop below 1/sqrt(2): %d/%d cells",
        nonoverlap_low, nonoverlap_cells);
  note("%d of %d non-overlapping cells sit below 1/sqrt(2)",
       nonoverlap_low, nonoverlap_cells);
  check(map.meta.failed_cells.empty(), "no failed cells (%zu)",
        map.meta.failed_cells.size());
}

// Analytic gate oracle in the ideal limit.
void criterion5() {
  GateScenario sc;
  sc.instantaneous_transfer = true;
  sc.sin_alpha0 = 1.0;
  sc.eta = 0.0;
  const Matrix u4 = hold_propagator_restricted(sc);
  const Matrix xx = xx_gate(sc.j, sc.hold_duration()).entries;
  const double dev = (u4 - xx).cwiseAbs().maxCoeff();
  check(dev < 1e-8, "restricted hold propagator vs exp(-iJ XX tau): %.2e < 1e-8",
        dev);

  const auto r = run_protocol(sc);
  check(1.0 - r.f_rot < 1e-8,
        "ideal-limit fidelity to (|gg> - i|ee>)/sqrt(2): 1 - F = %.2e < 1e-8",
        1.0 - r.f_rot);
}

// CZ and CNOT circuit constructions, algebraic and integrator-fed.
void criterion6() {
  const auto cz = cz_circuit(0.7);
  const auto cz_cmp = equal_up_to_global_phase(cz.composed, gates::cz(), 1e-10);
  check(cz_cmp.equal, "algebraic CZ circuit: max dev %.2e < 1e-10",
        cz_cmp.max_deviation);
  const auto cnot = cnot_circuit(0.7);
  const auto cnot_cmp =
      equal_up_to_global_phase(cnot.composed, gates::cnot(), 1e-10);
  check(cnot_cmp.equal, "algebraic CNOT circuit: max dev %.2e < 1e-10",
        cnot_cmp.max_deviation);

  GateScenario sc;
  sc.instantaneous_transfer = true;
  sc.sin_alpha0 = 1.0;
  sc.eta = 0.0;
  const Matrix u4 = hold_propagator_restricted(sc);
  const auto cz_num = cz_circuit_from(u4);
  const auto cz_num_cmp =
      equal_up_to_global_phase(cz_num.composed, gates::cz(), 1e-6);
  check(cz_num_cmp.equal, "integrator-fed CZ circuit: max dev %.2e < 1e-6",
        cz_num_cmp.max_deviation);
  const auto cnot_num = cnot_circuit_from(cz_num.composed);
  const auto cnot_num_cmp =
      equal_up_to_global_phase(cnot_num.composed, gates::cnot(), 1e-6);
  check(cnot_num_cmp.equal, "integrator-fed CNOT circuit: max dev %.2e < 1e-6",
        cnot_num_cmp.max_deviation);
}

// Matchgate property suite over 1000 random draws.
void criterion7() {
  std::mt19937_64 rng(20240809);
  std::uniform_real_distribution<double> coup(-2.0, 2.0), tt(0.0, 4.0);
  const Matrix xx = kron(pauli::x(), pauli::x());
  const Matrix yy = kron(pauli::y(), pauli::y());
  const Matrix xy = kron(pauli::x(), pauli::y()) + kron(pauli::y(), pauli::x());
  int ok = 0;
  double worst_res = 0.0, worst_det = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix h = coup(rng) * xx + coup(rng) * yy + coup(rng) * xy;
    const auto dec = is_matchgate(GateMatrix(expm_i_hermitian(h, tt(rng))));
    worst_res = std::max(worst_res, dec.residual);
    worst_det = std::max(worst_det, dec.det_mismatch);
    if (dec.accepted && dec.residual < 1e-10 && dec.det_mismatch < 1e-10) ++ok;
  }
  check(ok == 1000,
        "%d/1000 random exp(-i(J XX + K YY + L(XY+YX))t) accepted "
        "(worst residual %.1e, det mismatch %.1e)",
        ok, worst_res, worst_det);
  check(!is_matchgate(GateMatrix(gates::cnot())).accepted, "CNOT rejected");
  check(!is_matchgate(GateMatrix(gates::swap())).accepted, "SWAP rejected");
}

// Spin-model constraints over 1000 random phase draws, plus the 4x4
// number-operator identity.
void criterion8() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> adist(0.0, units::pi / 2);
  std::uniform_real_distribution<double> bdist(-units::pi, units::pi);
  const double d = 1.0 / std::sqrt(3.0), u = 1.0;
  int ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = couplings_from_phase(adist(rng), bdist(rng), d, u);
    const double scale = std::max(std::abs(c.j * c.k), 1e-300);
    const bool l2 = std::abs(c.l * c.l - c.j * c.k) <= 1e-12 * scale;
    const bool sum = c.j + c.k <= u + 1e-12;
    if (l2 && sum) ++ok;
  }
  check(ok == 1000, "%d/1000 draws satisfy L^2 = JK (1e-12 rel) and J+K <= U_dd",
        ok);

  const double uu = 2.3;
  const Matrix nop = 0.5 * (Matrix::Identity(2, 2) + pauli::z());
  const Matrix i2 = Matrix::Identity(2, 2);
  const Matrix lhs = 2.0 * uu * kron(nop, nop);
  const Matrix rhs = (uu / 4.0) * (kron(i2 + 2.0 * pauli::z(), i2) +
                                   kron(i2, i2 + 2.0 * pauli::z())) +
                     2.0 * (uu / 4.0) * kron(pauli::z(), pauli::z());
  const double dev = (lhs - rhs).cwiseAbs().maxCoeff();
  check(dev < 1e-14, "number-operator identity on 4x4: max dev %.1e", dev);
}

// Feasibility numbers.
void criterion9() {
  const double gamma = scattering_rate(1e-7 * 100.0, 1.0e5);
  const double t_sc = 1.0 / gamma;
  check(std::abs(t_sc - 20.0) / 20.0 < 0.10,
        "1/Gamma_sc = %.2f s within 10%% of 20 s", t_sc);

  const double j = coupling_J(1.0, 500e-9, units::pi / 2, 0.0, 0.0);
  const double t_j = 1.0 / j;
  const bool within2 = t_j > 5e-6 && t_j < 2e-5;
  check(within2, "1/J = %.3e s for d = 1 D, r = 500 nm vs 10 us within x2",
        t_j);
  if (!within2) {
    const auto srf = registry_species(kRegistry, "SrF");
    const double u_srf = units::dipole_dipole_rad_s(srf.d_debye, 500e-9);
    note("d^2/(4 pi eps0 r^3)/hbar = %.0f rad/s for 1 D at 500 nm gives "
         "1/J = %.0f us with the 1/3 angular weight; the 10 us scale is "
         "recovered by the bare U_dd/hbar of the SrF dipole %.2f D (%.1f us)",
         3.0 * j, 1e6 / j, srf.d_debye, 1e6 / u_srf);
  }

  const double omega0 = 2 * units::pi * 1.5e5;
  const double mass = units::amu_to_kg(106.904);
  const auto p1 = heating_probability(omega0, mass, 2e-6, 1e6, 1e-7);
  const auto p2 = heating_probability(omega0, mass, 2e-6, 2e6, 1e-7);
  const auto p3 = heating_probability(omega0, mass, 2e-6, 1e6, 2e-7);
  const bool scaling =
      std::abs(p2.p_closed_form / p1.p_closed_form - 4.0) < 1e-9 &&
      std::abs(p3.p_closed_form / p1.p_closed_form - 4.0) < 1e-9;
  check(scaling, "P(2<-0) scales exactly as A0^2 t^2");
  const auto wide = heating_probability(omega0, mass, 0.3, 1e6, 1e-7);
  check(wide.p_closed_form < 1e-15, "P(2<-0) -> 0 as sigma -> inf (%.1e)",
        wide.p_closed_form);
  check(std::abs(p1.coefficient_ratio - 0.5) < 1e-4,
        "quadrature-oracle coefficient ratio reported: %.6f",
        p1.coefficient_ratio);
}

// Numerical hygiene: unitarity, step-halving convergence, determinism.
void criterion10() {
  const auto r = run_protocol(reference_scenario());
  check(std::abs(r.final_norm - 1.0) < 1e-9,
        "unitarity drift over the full protocol: %.2e < 1e-9",
        std::abs(r.final_norm - 1.0));

  // Step halving on the one-molecule STIRAP ramp.
  const auto s = stirap_schedule(1.0, 20.0, 40.0, 0.0, 0.0);
  Vector psi0 = Vector::Zero(4);
  psi0(kG) = 1.0;
  PropagatorSettings st;
  st.dt = 0.2;
  st.tol = 1e-8;
  const auto [psi, delta] =
      propagate_converged(rwa_generator(s, 0.0), psi0, s.t_start(), s.hold_start, st);
  check(delta < 1e-8, "step-halving convergence: %.2e < 1e-8", delta);

  // Two-molecule protocol at dt and dt/2.
  auto fine = reference_scenario();
  fine.dt = 0.05;
  const double df = std::abs(run_protocol(fine).f_comp - r.f_comp);
  check(df < 1e-8, "F_comp change under dt halving: %.2e < 1e-8", df);

  const auto base = reference_scenario();
  const auto a1 = AxisSpec::linspace("delta_diff", -0.002, 0.002, 3);
  const auto a2 = AxisSpec::linspace("delta_sum", -0.1, 0.1, 3);
  const auto m1 = sweep(base, a1, a2, 1);
  const auto m2 = sweep(base, a1, a2, 2);
  const auto m4 = sweep(base, a1, a2, 4);
  const bool identical =
      (m1.fidelity - m2.fidelity).cwiseAbs().maxCoeff() == 0.0 &&
      (m1.fidelity - m4.fidelity).cwiseAbs().maxCoeff() == 0.0 &&
      (m1.leakage - m4.leakage).cwiseAbs().maxCoeff() == 0.0;
  check(identical, "sweep results bit-identical across 1/2/4 workers");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);

  struct Entry {
    int id;
    const char* title;
    void (*fn)();
    double limit_s;
  };
  const std::vector<Entry> entries = {
      {1, "crossing field vs reference value and analytic limit", criterion1, 1.0},
      {2, "reference gate fidelities", criterion2, 10.0},
      {3, "two-photon-detuning fidelity map (41x41, 4 workers)", criterion3, 600.0},
      {4, "pulse-geometry fidelity map", criterion4, 600.0},
      {5, "analytic hold-window gate oracle", criterion5, 0.0},
      {6, "CZ and CNOT circuit constructions", criterion6, 0.0},
      {7, "matchgate property suite (1000 draws)", criterion7, 0.0},
      {8, "spin-model coupling constraints (1000 draws)", criterion8, 0.0},
      {9, "feasibility reference numbers", criterion9, 0.0},
      {10, "numerical hygiene", criterion10, 0.0},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (only != 0 && e.id != only) continue;
    Criterion crit{e.id, e.title, {}, 0.0};
    std::vector<std::string> notes;
    g_checks = &crit.checks;
    g_notes = &notes;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.fn();
    } catch (const std::exception& ex) {
      crit.checks.push_back({std::string("exception: ") + ex.what(), false});
    }
    crit.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (e.limit_s > 0.0)
      crit.checks.push_back(
          {"runtime " + std::to_string(crit.seconds) + " s < " +
               std::to_string(e.limit_s) + " s",
           crit.seconds < e.limit_s});

    std::printf("criterion %2d [%s] %s (%.2f s)\n", crit.id,
                crit.pass() ? "PASS" : "FAIL", crit.title.c_str(), crit.seconds);
    for (const auto& c : crit.checks)
      std::printf("    %s %s\n", c.pass ? "ok  " : "FAIL", c.what.c_str());
    for (const auto& n : notes) std::printf("    note: %s\n", n.c_str());
    if (!crit.pass()) ++failures;
  }
  return failures;
}
