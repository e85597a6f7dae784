#pragma once

// Single-molecule spectroscopy of a 2-Sigma polar molecule in a magnetic
// field with an optional tensor lightshift:
//
//   H = B_e N^2 + gamma_sr N.S + g_S mu_B B S_Z - U_LS C_{2,0} x I_S
//
// in the product basis |v; N, M_N>|M_S>. The spin-rotation term is built
// from ladder operators, N.S = N_z S_z + (N+ S- + N- S+)/2. The tensor
// lightshift keeps only its N-diagonal part by default (regime U_LS << B_e);
// the N +/- 2 coupling can be switched on to quantify what is neglected.
//
// The computational states are the five field-dressed eigenvectors
//   |g>  ~ |v0; 0, 0, up>      |g'> ~ |v0; 0, 0, dn>
//   |e>  ~ |v0; 1, 0, dn>      |f>  ~ |v1; 1,-1, up>
//   |e'> ~ |v0; 2, 0, dn>
// identified by dominant bare character, with global phases fixed so the
// dominant amplitude is real positive.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "molgate/angular.hpp"
#include "molgate/errors.hpp"
#include "molgate/linalg.hpp"
#include "molgate/units.hpp"

namespace molgate {

struct MoleculeParams {
  std::string name;
  // Per vibrational level v = 0, 1; rad/s.
  std::array<double, 2> be_rad_s{0.0, 0.0};
  std::array<double, 2> gamma_sr_rad_s{0.0, 0.0};
  double delta_alpha_a03 = 0.0;  // polarizability anisotropy, a0^3
  double alpha_avg_a03 = 0.0;    // Re(alpha), a0^3
  double rho_im_over_re = 0.0;   // Im(alpha)/Re(alpha)
  double d_debye = 0.0;          // body-frame dipole moment, D
  double mass_amu = 0.0;
  double g_s = 2.0;

  void validate() const {
    if (be_rad_s[0] <= 0.0 || d_debye <= 0.0 || mass_amu <= 0.0)
      throw ConfigError("MoleculeParams: B_e, d and mass must be positive");
  }

  // gamma_sr << B_e is required by the perturbative qubit-state expansion.
  bool perturbative_regime_ok() const {
    return gamma_sr_rad_s[0] <= 0.1 * be_rad_s[0] &&
           gamma_sr_rad_s[1] <= 0.1 * std::max(be_rad_s[1], be_rad_s[0]);
  }

  // eta = gamma_sr / (g_S mu_B B), evaluated at the applied field B.
  double eta(double b_gauss, int v = 0) const {
    return gamma_sr_rad_s[v] /
           (g_s * units::bohr_magneton_rad_s_per_gauss * b_gauss);
  }
};

// --- constants registry -----------------------------------------------------

// One record per species:
//   name B_e_cm-1(v0) B_e_cm-1(v1) gamma_sr_MHz(v0) gamma_sr_MHz(v1)
//   delta_alpha_a0^3 alpha_avg_a0^3 rho_im_over_re dipole_D mass_amu
inline std::map<std::string, MoleculeParams> load_registry(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RegistryError("registry file not readable: " + path);
  std::map<std::string, MoleculeParams> table;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string name;
    if (!(ss >> name)) continue;
    double be0, be1, g0, g1, dalpha, aavg, rho, d, mass;
    if (!(ss >> be0 >> be1 >> g0 >> g1 >> dalpha >> aavg >> rho >> d >> mass))
      throw RegistryError("registry record malformed for species '" + name +
                          "' in " + path);
    MoleculeParams p;
    p.name = name;
    p.be_rad_s = {units::cm1_to_rad_s(be0), units::cm1_to_rad_s(be1)};
    p.gamma_sr_rad_s = {units::mhz_to_rad_s(g0), units::mhz_to_rad_s(g1)};
    p.delta_alpha_a03 = dalpha;
    p.alpha_avg_a03 = aavg;
    p.rho_im_over_re = rho;
    p.d_debye = d;
    p.mass_amu = mass;
    p.validate();
    table[name] = p;
  }
  if (table.empty()) throw RegistryError("registry has no records: " + path);
  return table;
}

inline MoleculeParams registry_species(const std::string& path,
                                       const std::string& name) {
  auto table = load_registry(path);
  auto it = table.find(name);
  if (it == table.end())
    throw RegistryError("species '" + name + "' not found in " + path);
  return it->second;
}

// --- basis -------------------------------------------------------------------

struct StateLabel {
  int v = 0;
  int n = 0;
  int m_n = 0;
  int two_ms = 1;  // +1 = spin up, -1 = spin down

  int two_mj() const { return 2 * m_n + two_ms; }

  bool operator==(const StateLabel&) const = default;

  // CSV-safe label, e.g. "v0;N1;M-1;up".
  std::string str() const {
    std::ostringstream ss;
    ss << "v" << v << ";N" << n << ";M" << m_n
       << (two_ms > 0 ? ";up" : ";dn");
    return ss.str();
  }
};

struct SpinRotBasis {
  std::vector<StateLabel> labels;
  int n_max = 0;

  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(labels.size());
  }

  Eigen::Index index_of(const StateLabel& s) const {
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (labels[i] == s) return i;
    throw ConfigError("basis does not contain state " + s.str());
  }

  bool contains(const StateLabel& s) const {
    return std::find(labels.begin(), labels.end(), s) != labels.end();
  }
};

// Deterministic ordering, lexicographic in (v, N, M_N, M_S).
inline SpinRotBasis build_basis(int n_max, const std::set<int>& vib_levels) {
  if (n_max < 1)
    throw ConfigError("build_basis: N_max must be >= 1 (qubit states live in N=1)");
  SpinRotBasis basis;
  basis.n_max = n_max;
  for (int v : vib_levels) {
    if (v != 0 && v != 1)
      throw ConfigError("build_basis: only vibrational levels 0 and 1 are modeled");
    for (int n = 0; n <= n_max; ++n)
      for (int m_n = -n; m_n <= n; ++m_n)
        for (int two_ms : {-1, 1})
          basis.labels.push_back({v, n, m_n, two_ms});
  }
  return basis;
}

// --- Hamiltonian --------------------------------------------------------------

struct OneBodyOptions {
  // Keep the N +/- 2 part of C_{2,0}? Off by default: for U_LS << B_e the
  // tensor lightshift does not couple different N. Switching it on is the
  // validation hook for quantifying the neglected coupling.
  bool lightshift_n_coupling = false;
};

inline HermitianOperator one_body_hamiltonian(const MoleculeParams& params,
                                              double b_gauss, double u_ls,
                                              const SpinRotBasis& basis,
                                              OneBodyOptions opts = {}) {
  params.validate();
  const double zeeman =
      params.g_s * units::bohr_magneton_rad_s_per_gauss * b_gauss;
  Matrix h = Matrix::Zero(basis.dim(), basis.dim());
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    const StateLabel& a = basis.labels[i];
    const double be = params.be_rad_s[a.v];
    const double gamma = params.gamma_sr_rad_s[a.v];
    const double ms = 0.5 * a.two_ms;
    h(i, i) = be * a.n * (a.n + 1.0) + gamma * a.m_n * ms + zeeman * ms -
              u_ls * angular::ckq_element(a.n, a.m_n, 2, 0, a.n, a.m_n);
    for (Eigen::Index j = 0; j < basis.dim(); ++j) {
      if (i == j) continue;
      const StateLabel& b = basis.labels[j];
      if (a.v != b.v) continue;
      // (N+ S- + N- S+)/2 with standard ladder coefficients; S = 1/2.
      if (a.n == b.n && a.m_n == b.m_n + 1 && a.two_ms == b.two_ms - 2)
        h(i, j) += 0.5 * gamma * angular::ladder_plus(b.n, b.m_n);
      if (a.n == b.n && a.m_n == b.m_n - 1 && a.two_ms == b.two_ms + 2)
        h(i, j) += 0.5 * gamma * angular::ladder_minus(b.n, b.m_n);
      if (opts.lightshift_n_coupling && a.two_ms == b.two_ms &&
          a.m_n == b.m_n && std::abs(a.n - b.n) == 2)
        h(i, j) -= u_ls * angular::ckq_element(a.n, a.m_n, 2, 0, b.n, b.m_n);
    }
  }
  return HermitianOperator(std::move(h), "rad/s");
}

// --- blocked eigensolve --------------------------------------------------------

struct EigenSystem {
  std::vector<double> energies;        // one per eigenvector
  std::vector<Vector> states;          // full-dimension, phase-fixed
  std::vector<std::pair<int, int>> block;  // (v, 2*M_J) per eigenvector
};

// H conserves v and M_J = M_N + M_S; diagonalizing per symmetry block keeps
// degenerate states from different sectors (e.g. the engineered g/e crossing)
// from mixing numerically.
inline EigenSystem solve_blocked(const HermitianOperator& h,
                                 const SpinRotBasis& basis) {
  if (h.dim() != basis.dim())
    throw ConfigError("solve_blocked: operator dimension does not match basis");
  std::map<std::pair<int, int>, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < basis.dim(); ++i)
    groups[{basis.labels[i].v, basis.labels[i].two_mj()}].push_back(i);

  EigenSystem out;
  for (const auto& [key, idx] : groups) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix sub(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c)
        sub(r, c) = h.entries(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("solve_blocked: eigensolver failed");
    for (Eigen::Index k = 0; k < m; ++k) {
      Vector full = Vector::Zero(basis.dim());
      for (Eigen::Index r = 0; r < m; ++r)
        full(idx[r]) = es.eigenvectors()(r, k);
      out.energies.push_back(es.eigenvalues()(k));
      out.states.push_back(fix_phase(std::move(full)));
      out.block.push_back(key);
    }
  }
  return out;
}

struct NamedState {
  double energy = 0.0;
  Vector ket;
  double dominant_weight = 0.0;
};

// Eigenvector with maximal overlap on the target bare state. Throws when the
// dominant amplitude drops below 0.6 (identification ambiguity).
inline NamedState identify_state(const EigenSystem& sys,
                                 const SpinRotBasis& basis,
                                 const StateLabel& target) {
  const Eigen::Index t = basis.index_of(target);
  double best = -1.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < sys.states.size(); ++k) {
    const double amp = std::abs(sys.states[k](t));
    if (amp > best) {
      best = amp;
      best_k = k;
    }
  }
  if (best < 0.6)
    throw DegeneracyError("state identification ambiguous for " + target.str() +
                          " (dominant amplitude " + std::to_string(best) + ")");
  return {sys.energies[best_k], sys.states[best_k], best};
}

inline std::string dominant_label(const SpinRotBasis& basis, const Vector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  return basis.labels[imax].str();
}

// --- qubit states ----------------------------------------------------------------

struct QubitStates {
  Vector g, e, gp, f, ep;
  double a = 0.0, b = 0.0, c = 0.0;   // minority-component weights
  double eta = 0.0, eta_prime = 0.0;  // gamma_sr / (g_S mu_B B) per v
  double eps_g = 0.0, eps_e = 0.0, eps_gp = 0.0, eps_f = 0.0, eps_ep = 0.0;
  double b_gauss = 0.0;
  double u_ls = 0.0;  // rad/s
};

inline const StateLabel kLabelG{0, 0, 0, +1};
inline const StateLabel kLabelGp{0, 0, 0, -1};
inline const StateLabel kLabelE{0, 1, 0, -1};
inline const StateLabel kLabelEMinor{0, 1, -1, +1};
inline const StateLabel kLabelF{1, 1, -1, +1};
inline const StateLabel kLabelFMinor{1, 1, 0, -1};
inline const StateLabel kLabelEp{0, 2, 0, -1};
inline const StateLabel kLabelEpMinor{0, 2, -1, +1};

inline QubitStates qubit_states(const MoleculeParams& params, double b_gauss,
                                double u_ls, const SpinRotBasis& basis,
                                OneBodyOptions opts = {}) {
  if (b_gauss <= 0.0) throw ConfigError("qubit_states: B must be positive");
  if (basis.n_max < 2)
    throw ConfigError("qubit_states: N_max >= 2 required for |e'>");
  if (!basis.contains(kLabelF))
    throw ConfigError("qubit_states: basis must include v=1 for |f>");
  const auto h = one_body_hamiltonian(params, b_gauss, u_ls, basis, opts);
  const auto sys = solve_blocked(h, basis);

  QubitStates q;
  const auto sg = identify_state(sys, basis, kLabelG);
  const auto sgp = identify_state(sys, basis, kLabelGp);
  const auto se = identify_state(sys, basis, kLabelE);
  const auto sf = identify_state(sys, basis, kLabelF);
  const auto sep = identify_state(sys, basis, kLabelEp);
  q.g = sg.ket;
  q.gp = sgp.ket;
  q.e = se.ket;
  q.f = sf.ket;
  q.ep = sep.ket;
  q.eps_g = sg.energy;
  q.eps_gp = sgp.energy;
  q.eps_e = se.energy;
  q.eps_f = sf.energy;
  q.eps_ep = sep.energy;
  q.a = std::norm(q.e(basis.index_of(kLabelEMinor)));
  q.b = std::norm(q.f(basis.index_of(kLabelFMinor)));
  q.c = std::norm(q.ep(basis.index_of(kLabelEpMinor)));
  q.eta = params.eta(b_gauss, 0);
  q.eta_prime = params.eta(b_gauss, 1);
  q.b_gauss = b_gauss;
  q.u_ls = u_ls;
  return q;
}

// --- crossing and lightshift tuning ------------------------------------------------

namespace detail {

// eps_e - eps_g at given field and lightshift.
inline double qubit_gap(const MoleculeParams& params, double b_gauss,
                        double u_ls, const SpinRotBasis& basis) {
  const auto h = one_body_hamiltonian(params, b_gauss, u_ls, basis);
  const auto sys = solve_blocked(h, basis);
  return identify_state(sys, basis, kLabelE).energy -
         identify_state(sys, basis, kLabelG).energy;
}

// Bisection to bracketing tolerance, then Newton polish on f; deterministic.
template <class F>
double find_root(F&& f, double lo, double hi, double f_tol, double x_rel_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NoCrossingError("find_root: no sign change in bracket");
  while (hi - lo > x_rel_tol * std::max(std::abs(lo), std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double fx = f(x);
    if (std::abs(fx) < f_tol) break;
    const double dx = 1e-7 * std::max(std::abs(x), 1.0);
    const double slope = (f(x + dx) - f(x - dx)) / (2.0 * dx);
    if (slope == 0.0) break;
    const double next = x - fx / slope;
    if (next > lo && next < hi) x = next;
  }
  return x;
}

}  // namespace detail

// Field where |g> and |e> become degenerate; 2 B_e / (g_S mu_B) for
// gamma_sr = 0, slightly shifted by the spin-rotation repulsion otherwise.
inline double find_crossing(const MoleculeParams& params, double u_ls,
                            int n_max = 3) {
  const auto basis = build_basis(n_max, {0});
  const double b_guess = 2.0 * params.be_rad_s[0] /
                         (params.g_s * units::bohr_magneton_rad_s_per_gauss);
  const double f_tol = 1e-10 * params.be_rad_s[0];
  auto gap = [&](double b) {
    return detail::qubit_gap(params, b, u_ls, basis);
  };
  return detail::find_root(gap, 0.05 * b_guess, 1.5 * b_guess, f_tol, 1e-13);
}

// Lightshift U_0 that closes the qubit gap at fixed B < B_cross.
inline double lightshift_for_zero_gap(const MoleculeParams& params,
                                      double b_gauss, int n_max = 3) {
  const auto basis = build_basis(n_max, {0});
  const double gap0 = detail::qubit_gap(params, b_gauss, 0.0, basis);
  if (gap0 <= 0.0)
    throw NoCrossingError(
        "lightshift_for_zero_gap: B >= B_cross, no positive U_0 exists");
  const double f_tol = 1e-10 * params.be_rad_s[0];
  auto gap = [&](double u) {
    return detail::qubit_gap(params, b_gauss, u, basis);
  };
  return detail::find_root(gap, 0.0, 5.0 * gap0, f_tol, 1e-13);
}

// --- dipole matrix elements ----------------------------------------------------------

enum class QubitIndex { G = 0, Gp = 1, E = 2, F = 3, Ep = 4 };

inline const char* qubit_index_name(QubitIndex x) {
  switch (x) {
    case QubitIndex::G: return "g";
    case QubitIndex::Gp: return "g'";
    case QubitIndex::E: return "e";
    case QubitIndex::F: return "f";
    case QubitIndex::Ep: return "e'";
  }
  return "?";
}

// <x| D_q |y> for the five named states and q = -1, 0, +1. D_q is the
// dimensionless dipole C_{1,q} acting on rotation, identity on spin; the
// vibrational overlap does not enter on the dimensionless scale.
struct DipoleTable {
  std::array<std::array<std::array<Complex, 3>, 5>, 5> d{};

  Complex operator()(QubitIndex x, QubitIndex y, int q) const {
    return d[static_cast<int>(x)][static_cast<int>(y)][q + 1];
  }
};

inline DipoleTable dipole_matrix_elements(const QubitStates& states,
                                          const SpinRotBasis& basis) {
  const std::array<const Vector*, 5> kets = {&states.g, &states.gp, &states.e,
                                             &states.f, &states.ep};
  DipoleTable table;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int q = -1; q <= 1; ++q) {
        Complex sum = 0.0;
        for (Eigen::Index i = 0; i < basis.dim(); ++i) {
          const Complex ci = (*kets[x])(i);
          if (ci == Complex(0.0, 0.0)) continue;
          const StateLabel& a = basis.labels[i];
          for (Eigen::Index j = 0; j < basis.dim(); ++j) {
            const Complex cj = (*kets[y])(j);
            if (cj == Complex(0.0, 0.0)) continue;
            const StateLabel& b = basis.labels[j];
            if (a.two_ms != b.two_ms) continue;
            sum += std::conj(ci) * cj *
                   angular::ckq_element(a.n, a.m_n, 1, q, b.n, b.m_n);
          }
        }
        table.d[x][y][q + 1] = sum;
      }
  return table;
}

// --- Zeeman spectrum scan (CLI `spectrum`) ---------------------------------------------

struct SpectrumRow {
  double b_gauss;
  int state_index;
  double energy_mhz;
  std::string dominant;
};

inline std::vector<SpectrumRow> zeeman_spectrum(const MoleculeParams& params,
                                                const SpinRotBasis& basis,
                                                const std::vector<double>& b_grid,
                                                double u_ls = 0.0) {
  std::vector<SpectrumRow> rows;
  for (double b : b_grid) {
    const auto h = one_body_hamiltonian(params, b, u_ls, basis);
    auto sys = solve_blocked(h, basis);
    std::vector<std::size_t> order(sys.energies.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) {
      return sys.energies[l] < sys.energies[r];
    });
    int idx = 0;
    for (auto k : order)
      rows.push_back({b, idx++, units::rad_s_to_mhz(sys.energies[k]),
                      dominant_label(basis, sys.states[k])});
  }
  return rows;
}

}  // namespace molgate
