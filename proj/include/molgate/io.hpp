#pragma once

// Deterministic file emission: CSV/gnuplot writers for the computed
// products, JSON metadata sidecars, atomic writes (temp-then-rename) and a
// stable content hash. Byte-identical output for identical inputs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "molgate/dressing.hpp"
#include "molgate/errors.hpp"
#include "molgate/feasibility.hpp"
#include "molgate/matchgate.hpp"
#include "molgate/molecule.hpp"
#include "molgate/pairgate.hpp"
#include "molgate/spinmodel.hpp"

namespace molgate::io {

using nlohmann::json;

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

inline void atomic_write_text(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

// --- CSV emitters -------------------------------------------------------------------

inline std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << "B_gauss,state_index,energy_MHz,dominant_label\n";
  for (const auto& r : rows)
    out << format_double(r.b_gauss) << ',' << r.state_index << ','
        << format_double(r.energy_mhz) << ',' << r.dominant << '\n';
  return out.str();
}

inline std::string stirap_csv(const std::vector<StirapPoint>& traj) {
  std::ostringstream out;
  out << "t,pop_g,pop_gp,pop_f,pop_e,mixing_angle\n";
  for (const auto& p : traj)
    out << format_double(p.t) << ',' << format_double(p.pop_g) << ','
        << format_double(p.pop_gp) << ',' << format_double(p.pop_f) << ','
        << format_double(p.pop_e) << ',' << format_double(p.mixing_angle)
        << '\n';
  return out.str();
}

inline std::string gate_trajectory_csv(const std::vector<PairTrajectoryPoint>& traj) {
  std::ostringstream out;
  out << "t,pop_gg,pop_gpgp,pop_ee,pop_ff,pop_dressed_qubit,pop_comp\n";
  for (const auto& p : traj)
    out << format_double(p.t) << ',' << format_double(p.pop_gg) << ','
        << format_double(p.pop_gpgp) << ',' << format_double(p.pop_ee) << ','
        << format_double(p.pop_ff) << ','
        << format_double(p.pop_dressed_qubit) << ','
        << format_double(p.pop_comp) << '\n';
  return out.str();
}

// Long-format map: one row per cell, row-major in (axis1, axis2).
inline std::string fidelity_map_csv(const FidelityMap& map) {
  std::ostringstream out;
  out << map.axis1.name << ',' << map.axis2.name << ",fidelity,leakage\n";
  for (Eigen::Index i = 0; i < map.fidelity.rows(); ++i)
    for (Eigen::Index j = 0; j < map.fidelity.cols(); ++j)
      out << format_double(map.axis1.values[i]) << ','
          << format_double(map.axis2.values[j]) << ','
          << format_double(map.fidelity(i, j)) << ','
          << format_double(map.leakage(i, j)) << '\n';
  return out.str();
}

// Gnuplot-compatible grid: blocks separated by blank lines, splot-ready.
inline std::string fidelity_map_gnuplot(const FidelityMap& map) {
  std::ostringstream out;
  out << "# " << map.axis1.name << ' ' << map.axis2.name << " fidelity\n";
  for (Eigen::Index i = 0; i < map.fidelity.rows(); ++i) {
    if (i > 0) out << '\n';
    for (Eigen::Index j = 0; j < map.fidelity.cols(); ++j)
      out << format_double(map.axis1.values[i]) << ' '
          << format_double(map.axis2.values[j]) << ' '
          << format_double(map.fidelity(i, j)) << '\n';
  }
  return out.str();
}

inline std::string coupling_table_csv(const std::vector<PairCoupling>& pairs) {
  std::ostringstream out;
  out << "i,j,J,K,L,M,U\n";
  for (const auto& pc : pairs)
    out << pc.i << ',' << pc.j << ',' << format_double(pc.c.j) << ','
        << format_double(pc.c.k) << ',' << format_double(pc.c.l) << ','
        << format_double(pc.c.m) << ',' << format_double(pc.c.u) << '\n';
  return out.str();
}

inline std::string spectrum_values_csv(const std::vector<double>& eigenvalues) {
  std::ostringstream out;
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out << i << ',' << format_double(eigenvalues[i]) << '\n';
  return out.str();
}

// --- CSV parsing (round-trip checks) ----------------------------------------------

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// --- JSON serializers ---------------------------------------------------------------

inline json sweep_metadata_json(const FidelityMap& map) {
  json j;
  j["scenario"] = map.meta.scenario_summary;
  j["fidelity_kind"] = map.meta.fidelity_kind;
  j["workers"] = map.meta.workers;
  j["axis1"] = {{"name", map.axis1.name}, {"values", map.axis1.values}};
  j["axis2"] = {{"name", map.axis2.name}, {"values", map.axis2.values}};
  json failed = json::array();
  for (std::size_t k = 0; k < map.meta.failed_cells.size(); ++k)
    failed.push_back({{"i", map.meta.failed_cells[k].first},
                      {"j", map.meta.failed_cells[k].second},
                      {"error", map.meta.errors[k]}});
  j["failed_cells"] = failed;
  return j;
}

inline json protocol_result_json(const ProtocolResult& r) {
  return json{{"f_rot", r.f_rot},
              {"f_comp", r.f_comp},
              {"leakage", r.leakage},
              {"final_norm", r.final_norm},
              {"j", r.j},
              {"tau_e", r.tau_e},
              {"sin_alpha0", r.sin_alpha0},
              {"t_i", r.t_i},
              {"t0", r.t0},
              {"t1", r.t1},
              {"t_f", r.t_f},
              {"suppressed_elements",
               {{"d_De", r.suppressed.d_de},
                {"d_pm_e", r.suppressed.d_pm_e},
                {"d_D_pm", r.suppressed.d_d_pm},
                {"d_pm", r.suppressed.d_pm}}}};
}

inline json matchgate_json(const MatchgateDecomposition& dec) {
  auto cplx = [](const Complex& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
  };
  auto block = [&](const Matrix& m) {
    return json{{"a11", cplx(m(0, 0))},
                {"a12", cplx(m(0, 1))},
                {"a21", cplx(m(1, 0))},
                {"a22", cplx(m(1, 1))}};
  };
  return json{{"is_matchgate", dec.accepted},
              {"residual", dec.residual},
              {"det_mismatch", dec.det_mismatch},
              {"det_a", cplx(dec.det_a)},
              {"det_b", cplx(dec.det_b)},
              {"block_a", block(dec.a)},
              {"block_b", block(dec.b)}};
}

inline json feasibility_json(const FeasibilityReport& r) {
  json j{{"gamma_sc_per_s", r.gamma_sc},
         {"scattering_time_s", r.one_over_gamma_sc},
         {"j_rad_per_s", r.j_rad_s},
         {"j_1debye_rad_per_s", r.j_1debye_rad_s},
         {"tau_e_s", r.tau_e_s},
         {"tau_e_gamma", r.tau_e_gamma},
         {"gate_instantaneous", r.gate_instantaneous},
         {"omega0_required_rad_per_s", r.omega0_required_rad_s},
         {"omega0_required_MHz", r.omega0_required_mhz},
         {"i_mid_ir_W_cm2", r.i_mid_ir_w_cm2},
         {"weak_line_penalty", r.weak_line_penalty},
         {"u_ls_rad_per_s", r.u_ls_rad_s},
         {"trap_length_m", r.l0_m},
         {"l0_over_sigma", r.l0_over_sigma},
         {"heating",
          {{"gamma", r.heating.gamma},
           {"p_closed_form", r.heating.p_closed_form},
           {"p_quadrature", r.heating.p_quadrature},
           {"coefficient_ratio", r.heating.coefficient_ratio},
           {"short_time_ok", r.heating.short_time_ok}}}};
  if (!std::isnan(r.chirp_margin)) j["chirp_margin"] = r.chirp_margin;
  return j;
}

inline std::string feasibility_table(const FeasibilityReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& k, const std::string& v) {
    out << "  " << k;
    for (std::size_t i = k.size(); i < 34; ++i) out << ' ';
    out << v << '\n';
  };
  out << "feasibility report\n";
  row("scattering rate [1/s]", format_double(r.gamma_sc));
  row("scattering time [s]", format_double(r.one_over_gamma_sc));
  row("J (species dipole) [rad/s]", format_double(r.j_rad_s));
  row("J (1 Debye) [rad/s]", format_double(r.j_1debye_rad_s));
  row("tau_e = pi/4J [s]", format_double(r.tau_e_s));
  row("tau_e * Gamma_sc", format_double(r.tau_e_gamma));
  row("gate instantaneous?", r.gate_instantaneous ? "yes" : "NO (> 0.01)");
  row("required Omega0 [MHz]", format_double(r.omega0_required_mhz));
  row("mid-IR intensity [W/cm^2]", format_double(r.i_mid_ir_w_cm2));
  row("weak-line penalty eta^-2", format_double(r.weak_line_penalty));
  row("U_LS at I_LS [rad/s]", format_double(r.u_ls_rad_s));
  row("trap length l0 [m]", format_double(r.l0_m));
  row("l0 / sigma", format_double(r.l0_over_sigma));
  row("heating gamma", format_double(r.heating.gamma));
  row("heating P(2<-0) closed form", format_double(r.heating.p_closed_form));
  row("heating P(2<-0) quadrature", format_double(r.heating.p_quadrature));
  row("heating coefficient ratio", format_double(r.heating.coefficient_ratio));
  if (!std::isnan(r.chirp_margin))
    row("chirp margin", format_double(r.chirp_margin));
  return out.str();
}

// 4x4 complex matrix from CSV of 16 rows "re,im" (row-major), per the
// matchgate-check input format.
inline Matrix read_matrix4_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read matrix file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str());
  // Tolerate a header row.
  if (!rows.empty() && !rows[0].empty()) {
    char* end = nullptr;
    std::strtod(rows[0][0].c_str(), &end);
    if (end == rows[0][0].c_str()) rows.erase(rows.begin());
  }
  if (rows.size() != 16)
    throw IoError("matrix file must have 16 data rows (re,im), got " +
                  std::to_string(rows.size()));
  Matrix m(4, 4);
  for (int k = 0; k < 16; ++k) {
    if (rows[k].size() < 2)
      throw IoError("matrix row " + std::to_string(k) + " needs re,im");
    m(k / 4, k % 4) =
        Complex(std::stod(rows[k][0]), std::stod(rows[k][1]));
  }
  return m;
}

}  // namespace molgate::io
