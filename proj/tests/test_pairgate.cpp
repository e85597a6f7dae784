#include <catch2/catch_amalgamated.hpp>

#include "molgate/pairgate.hpp"

using namespace molgate;
using Catch::Approx;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

GateScenario fig3_scenario() {
  GateScenario sc;  // defaults are the reference gate: T0=20, tau=40, j T0=0.02
  sc.eta = 0.005;
  sc.dt = 0.1;
  return sc;
}

}  // namespace

TEST_CASE("coupling_J") {
  SECTION("magic angle kills the coupling") {
    const double magic = std::acos(1.0 / std::sqrt(3.0));
    REQUIRE(coupling_J(1.0, 500e-9, magic, 0.0, 0.0) ==
            Approx(0.0).margin(1e-10));
  }
  SECTION("Theta = pi/2: J = d^2 / 3 r^3, against an independent constants route") {
    const double j = coupling_J(1.0, 500e-9, units::pi / 2, 0.0, 0.0);
    // (1 D)^2/(4 pi eps0) = 1.00000e-49 J m^3; /r^3 /hbar /3.
    const double oracle = 1.00000e-49 / (1.25e-19 * units::hbar) / 3.0;
    REQUIRE(j == Approx(oracle).epsilon(1e-4));
    // d = 1 D, r = 500 nm: 1/J = 395 us (the frozen unit-conversion value).
    REQUIRE(1.0 / j == Approx(3.954e-4).epsilon(1e-3));
  }
  SECTION("suppression factors multiply in") {
    const double j0 = coupling_J(1.0, 500e-9, units::pi / 2, 0.0, 0.0);
    REQUIRE(coupling_J(1.0, 500e-9, units::pi / 2, 0.1, 0.2) ==
            Approx(j0 * (1 - 0.01) * (1 - 0.04)).epsilon(1e-12));
  }
  REQUIRE_THROWS_AS(coupling_J(1.0, -1.0, 0.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("dipole-dipole operator in the dressed frame") {
  SECTION("eta = 0, delta = 0: only |ee><DD| and |eD><De| survive, amplitude J") {
    const double u_dd = 3.3;
    const auto dip = EffectiveDipoles::from_eta(0.0, 0.0);
    const auto v = dipole_dipole_operator(dip, u_dd, InteractionForm::TruncatedD0);
    const double alpha = units::pi / 2, beta = 0.7;
    // Dressed single-molecule frame {D, B+, B-, e}.
    const auto db = dressed_basis(0.0, 0.0,
                                  std::polar(std::sin(alpha), beta),
                                  Complex(std::cos(alpha)));
    Matrix q1(4, 4);
    q1.col(0) << db.d(0), db.d(1), db.d(2), 0.0;
    q1.col(1) << db.b_plus(0), db.b_plus(1), db.b_plus(2), 0.0;
    q1.col(2) << db.b_minus(0), db.b_minus(1), db.b_minus(2), 0.0;
    q1.col(3) = bare_e4();
    const Matrix w = kron(q1, q1).adjoint() * v.entries * kron(q1, q1);
    const double j_expected = u_dd / 3.0;  // (d_eg')^2 sin^2(alpha)
    const int d = 0, e = 3;
    REQUIRE(std::abs(w(e * 4 + e, d * 4 + d)) == Approx(j_expected).epsilon(1e-12));
    REQUIRE(std::abs(w(e * 4 + d, d * 4 + e)) == Approx(j_expected).epsilon(1e-12));
    double off = 0.0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        const bool allowed = (r == e * 4 + e && c == d * 4 + d) ||
                             (r == d * 4 + d && c == e * 4 + e) ||
                             (r == e * 4 + d && c == d * 4 + e) ||
                             (r == d * 4 + e && c == e * 4 + d);
        if (!allowed) off = std::max(off, std::abs(w(r, c)));
      }
    REQUIRE(off < 1e-13);
  }

  SECTION("suppressed elements scale as the stated dressed-frame forms") {
    const double eta = 0.02;
    const auto dip = EffectiveDipoles::from_eta(eta, eta);
    for (double alpha : {0.3, 1.0, units::pi / 2 - 0.05}) {
      const auto s = suppressed_elements(dip, alpha);
      REQUIRE(s.d_de == Approx(std::cos(alpha) * dip.d_ge).epsilon(1e-12));
      REQUIRE(s.d_pm_e ==
              Approx(std::sin(alpha) * dip.d_ge / std::sqrt(2.0)).epsilon(1e-12));
      // d_D+- ~ delta d_gf / sqrt(2) for small delta = pi/2 - alpha.
      const double delta = units::pi / 2 - alpha;
      if (delta < 0.1)
        REQUIRE(s.d_d_pm == Approx(delta * dip.d_gf / std::sqrt(2.0)).epsilon(0.01));
    }
    // d_De -> 0 as alpha -> pi/2, and is O(eta) at fixed alpha.
    REQUIRE(suppressed_elements(dip, units::pi / 2).d_de ==
            Approx(0.0).margin(1e-16));
    REQUIRE(suppressed_elements(dip, 0.3).d_de < eta);
  }

  SECTION("bare-4level retains the sqrt(b)-suppressed g'<->f element") {
    const auto dip = EffectiveDipoles::from_eta(0.02, 0.02);
    const Matrix trunc = d0_operator(dip, InteractionForm::TruncatedD0);
    const Matrix bare = d0_operator(dip, InteractionForm::Bare4Level);
    REQUIRE(std::abs(trunc(kGp, kF)) == 0.0);
    REQUIRE(std::abs(bare(kGp, kF)) == Approx(dip.d_gp_f));
    REQUIRE(dip.d_gp_f == Approx(std::sqrt(0.5 * 0.02 * 0.02 / 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("run_protocol: ideal limit gives the exact entangler") {
  GateScenario sc;
  sc.instantaneous_transfer = true;
  sc.sin_alpha0 = 1.0;
  sc.eta = 0.0;
  const auto r = run_protocol(sc);
  REQUIRE(1.0 - r.f_rot < 1e-10);
  REQUIRE(r.leakage < 1e-12);
  REQUIRE(std::abs(r.final_norm - 1.0) < 1e-12);

  // Restricted hold propagator == exp(-i J XX tau) element-wise.
  const Matrix u4 = hold_propagator_restricted(sc);
  const Matrix xx = xx_gate(sc.j, sc.hold_duration()).entries;
  REQUIRE((u4 - xx).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("run_protocol: reference gate reproduces the published operating point") {
  const auto sc = fig3_scenario();
  const auto r = run_protocol(sc);
  // Computational-basis fidelity in [0.99, 1]; rotating-frame >= 0.99.
  REQUIRE(r.f_comp >= 0.99);
  REQUIRE(r.f_comp <= 1.0);
  REQUIRE(r.f_rot >= 0.99);
  // Regression pins for the achieved values.
  REQUIRE(r.f_comp == Approx(0.99763).margin(3e-3));
  REQUIRE(r.f_rot == Approx(0.99960).margin(1e-3));
  REQUIRE(std::abs(r.final_norm - 1.0) < 1e-9);
  REQUIRE(r.tau_e == Approx(units::pi / (4.0 * 0.001)).epsilon(1e-12));
}

TEST_CASE("run_protocol: large two-photon detuning freezes the input, F -> 1/sqrt(2)") {
  auto sc = fig3_scenario();
  sc.eta = 0.0;
  sc.delta_diff = 0.1;
  const auto r = run_protocol(sc);
  REQUIRE(r.f_rot == Approx(kInvSqrt2).margin(0.02));
}

TEST_CASE("run_protocol: non-overlapping pulses leak out of the qubit subspace") {
  auto sc = fig3_scenario();
  sc.tau = 100.0;
  sc.t0_width = 5.0;
  const auto r = run_protocol(sc);
  REQUIRE(r.f_rot < kInvSqrt2);
}

TEST_CASE("run_protocol: inputs, explicit kets and validation") {
  SECTION("all computational labels behave") {
    for (const std::string in : {"gg", "ge", "eg", "ee"}) {
      auto sc = fig3_scenario();
      sc.input_state = in;
      const auto r = run_protocol(sc);
      REQUIRE(r.f_comp > 0.99);
    }
  }
  SECTION("explicit superposition input") {
    auto sc = fig3_scenario();
    Vector ket = Vector::Zero(16);
    ket(kG * 4 + kG) = 1.0 / std::sqrt(2.0);
    ket(kG * 4 + kE) = 1.0 / std::sqrt(2.0);
    sc.input_ket = ket;
    const auto r = run_protocol(sc);
    REQUIRE(r.f_comp > 0.99);
  }
  SECTION("input outside the computational subspace is rejected") {
    auto sc = fig3_scenario();
    Vector ket = Vector::Zero(16);
    ket(kF * 4 + kF) = 1.0;
    sc.input_ket = ket;
    REQUIRE_THROWS_AS(run_protocol(sc), ConfigError);
  }
  SECTION("scenario validation") {
    GateScenario sc;
    sc.sin_alpha0 = 1.5;
    REQUIRE_THROWS_AS(sc.validate(), ConfigError);
    GateScenario sc2;
    sc2.input_state = "gx";
    REQUIRE_THROWS_AS(sc2.validate(), ConfigError);
    GateScenario sc3;
    sc3.j = 0.0;
    REQUIRE_THROWS_AS(sc3.validate(), ConfigError);
    REQUIRE(interaction_form_from("truncated-D0") == InteractionForm::TruncatedD0);
    REQUIRE(interaction_form_from("bare-4level") == InteractionForm::Bare4Level);
    REQUIRE_THROWS_AS(interaction_form_from("nonsense"), ConfigError);
  }
}

TEST_CASE("subspace closure: ideal hold never leaves {D,e}^x2") {
  GateScenario sc;
  sc.instantaneous_transfer = true;
  sc.sin_alpha0 = 1.0;
  sc.eta = 0.0;
  const auto r = run_protocol(sc, 64);
  double worst = 0.0;
  for (const auto& pt : r.trajectory)
    worst = std::max(worst, 1.0 - pt.pop_dressed_qubit);
  REQUIRE(worst < 1e-10);
}

TEST_CASE("analytic hold oracle at the operating point") {
  // With finite eta and delta the restricted propagator picks up
  // cos(alpha0)-channel corrections at the 1e-5 scale but no more.
  auto sc = fig3_scenario();
  const Matrix u4 = hold_propagator_restricted(sc);
  const Matrix xx = xx_gate(sc.j, sc.hold_duration()).entries;
  const double dev = (u4 - xx).cwiseAbs().maxCoeff();
  REQUIRE(dev < 1e-4);
  REQUIRE(dev > 1e-9);
}

TEST_CASE("error budget: 1 - F_comp vs (1 - F_rot) + leakage") {
  // Holds literally at the reference operating point; within a factor 2
  // across the resonant operating regime (the reverse ramp contributes
  // error not visible in either term).
  {
    const auto r = run_protocol(fig3_scenario());
    REQUIRE(1.0 - r.f_comp <= (1.0 - r.f_rot) + r.leakage);
  }
  for (double ds : {0.0, 0.2, 0.4})
    for (const std::string in : {"gg", "ge", "ee"}) {
      auto sc = fig3_scenario();
      sc.delta_sum = ds;
      sc.input_state = in;
      const auto r = run_protocol(sc);
      REQUIRE(1.0 - r.f_comp <= 2.0 * ((1.0 - r.f_rot) + r.leakage) + 1e-12);
    }
}

TEST_CASE("fidelity map symmetry in the two-photon detuning") {
  for (double dd : {0.0025, 0.01}) {
    auto plus = fig3_scenario();
    plus.delta_diff = dd;
    auto minus = fig3_scenario();
    minus.delta_diff = -dd;
    REQUIRE(run_protocol(plus).f_rot ==
            Approx(run_protocol(minus).f_rot).margin(1e-12));
  }
  // Point symmetry (sum, diff) -> (-sum, -diff).
  auto a = fig3_scenario();
  a.delta_sum = 0.2;
  a.delta_diff = 0.01;
  auto b = fig3_scenario();
  b.delta_sum = -0.2;
  b.delta_diff = -0.01;
  REQUIRE(run_protocol(a).f_rot == Approx(run_protocol(b).f_rot).margin(1e-12));
}

TEST_CASE("sweep: consistency, determinism, error policy") {
  auto base = fig3_scenario();

  SECTION("single-cell grid reproduces run_protocol exactly") {
    const auto map = sweep(base, {"delta_diff", {0.0}}, {"delta_sum", {0.1}}, 1);
    auto sc = base;
    sc.delta_sum = 0.1;
    const auto r = run_protocol(sc);
    REQUIRE(map.fidelity(0, 0) == r.f_rot);  // bit-identical
    REQUIRE(map.leakage(0, 0) == r.leakage);
  }

  SECTION("bit-identical across worker counts") {
    const auto a1 = AxisSpec::linspace("delta_diff", -0.004, 0.004, 3);
    const auto a2 = AxisSpec::linspace("delta_sum", -0.2, 0.2, 3);
    const auto m1 = sweep(base, a1, a2, 1);
    const auto m3 = sweep(base, a1, a2, 3);
    const auto m7 = sweep(base, a1, a2, 7);
    REQUIRE((m1.fidelity - m3.fidelity).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((m1.fidelity - m7.fidelity).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((m1.leakage - m7.leakage).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        REQUIRE(m1.fidelity(i, j) >= 0.0);
        REQUIRE(m1.fidelity(i, j) <= 1.0 + 1e-9);
      }
  }

  SECTION("failed cells become NaN sentinels with logged errors") {
    const auto map = sweep(base, {"j", {1e-3, 0.0}}, {"delta_sum", {0.0}}, 2);
    REQUIRE(std::isfinite(map.fidelity(0, 0)));
    REQUIRE(std::isnan(map.fidelity(1, 0)));
    REQUIRE(map.meta.failed_cells.size() == 1);
    REQUIRE(map.meta.failed_cells[0] == std::pair<int, int>{1, 0});
    REQUIRE(map.meta.errors.size() == 1);
  }

  SECTION("unknown axis rejected") {
    REQUIRE_THROWS_AS(sweep(base, {"bogus", {1.0}}, {"delta_sum", {0.0}}, 1),
                      ConfigError);
    REQUIRE_THROWS_AS(sweep(base, {"delta_diff", {}}, {"delta_sum", {0.0}}, 1),
                      ConfigError);
  }
}

TEST_CASE("fidelity of a DD input against the entangled target is 1/sqrt(2)") {
  Vector dd = Vector::Zero(4);
  dd(0) = 1.0;
  Vector target = Vector::Zero(4);
  target(0) = 1.0 / std::sqrt(2.0);
  target(3) = Complex(0.0, -1.0 / std::sqrt(2.0));
  REQUIRE(fidelity(dd, target) == Approx(kInvSqrt2).epsilon(1e-12));
}
