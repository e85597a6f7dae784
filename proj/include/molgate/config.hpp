#pragma once

// Run configuration: a strict-schema key-value store loaded from a JSON
// file and/or command-line overrides. Unknown keys are rejected by name;
// flag values win over file values and every conflict is logged. Physical
// quantities carry explicit unit suffixes in their key names; gate-scenario
// keys are in reduced units of the peak Rabi frequency Omega0.

#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "molgate/errors.hpp"
#include "molgate/pairgate.hpp"

namespace molgate {

enum class KeyKind { Number, Text, Flag };

struct KeySpec {
  KeyKind kind;
  std::variant<double, std::string, bool> default_value;
  const char* doc;
};

// The full key schema shared by every subcommand (docs/config.schema.json
// mirrors this table).
inline const std::map<std::string, KeySpec>& config_schema() {
  static const std::map<std::string, KeySpec> schema = {
      // species / registry
      {"species", {KeyKind::Text, std::string("SrF"), "registry species key"}},
      {"registry", {KeyKind::Text, std::string(""), "registry file override"}},
      // molecule / spectrum
      {"b_gauss", {KeyKind::Number, 5000.0, "magnetic field [G]"}},
      {"b_min_gauss", {KeyKind::Number, 0.0, "spectrum scan start [G]"}},
      {"b_max_gauss", {KeyKind::Number, 8000.0, "spectrum scan end [G]"}},
      {"b_points", {KeyKind::Number, 81.0, "spectrum scan points"}},
      {"n_max", {KeyKind::Number, 3.0, "rotational basis cutoff"}},
      {"u_ls_mhz", {KeyKind::Number, 0.0, "tensor lightshift [MHz]"}},
      // gate scenario, reduced units (reference-gate defaults)
      {"t0_omega0", {KeyKind::Number, 20.0, "pulse width T0 Omega0"}},
      {"tau_omega0", {KeyKind::Number, 40.0, "pulse delay tau Omega0"}},
      {"sin_alpha0", {KeyKind::Number, 0.995, "hold mixing-angle target"}},
      {"beta_rad", {KeyKind::Number, 0.0, "Raman relative phase"}},
      {"delta_sum_omega0", {KeyKind::Number, 0.0, "(Dp+Ds)/Omega0"}},
      {"delta_diff_omega0", {KeyKind::Number, 0.0, "(Dp-Ds)/Omega0"}},
      {"j_t0", {KeyKind::Number, 0.02, "coupling J*T0 at the base T0"}},
      {"tau_e_omega0", {KeyKind::Number, -1.0, "hold duration; <0 -> pi/4J"}},
      {"eps_e_hold_omega0", {KeyKind::Number, 0.0, "qubit gap during hold"}},
      {"eta", {KeyKind::Number, -1.0, "spin-rotation parameter; <0 -> from species at b_gauss"}},
      {"input_state", {KeyKind::Text, std::string("gg"), "gg|ge|eg|ee"}},
      {"interaction_form",
       {KeyKind::Text, std::string("truncated-D0"), "truncated-D0|bare-4level"}},
      {"instantaneous", {KeyKind::Flag, false, "skip the STIRAP ramps"}},
      {"dt", {KeyKind::Number, 0.05, "integrator step [1/Omega0]"}},
      {"stepper", {KeyKind::Text, std::string("magnus4"), "magnus4|midpoint"}},
      {"trajectory_samples", {KeyKind::Number, 0.0, "CSV samples per segment"}},
      {"hold_omega0", {KeyKind::Number, 0.0, "stirap subcommand hold window"}},
      // sweep
      {"axis1", {KeyKind::Text, std::string("delta_diff"), "sweep axis 1 name"}},
      {"axis2", {KeyKind::Text, std::string("delta_sum"), "sweep axis 2 name"}},
      {"axis1_min", {KeyKind::Number, -0.05, "axis 1 start"}},
      {"axis1_max", {KeyKind::Number, 0.05, "axis 1 end"}},
      {"axis1_points", {KeyKind::Number, 41.0, "axis 1 points"}},
      {"axis2_min", {KeyKind::Number, -0.4, "axis 2 start"}},
      {"axis2_max", {KeyKind::Number, 0.4, "axis 2 end"}},
      {"axis2_points", {KeyKind::Number, 41.0, "axis 2 points"}},
      {"fidelity_kind", {KeyKind::Text, std::string("rotating"), "rotating|computational"}},
      {"workers", {KeyKind::Number, 1.0, "sweep worker threads"}},
      {"checkpoint_rows", {KeyKind::Number, 0.0, "partial-result CSV every N axis1 rows"}},
      // spinmodel
      {"n_sites", {KeyKind::Number, 2.0, "chain length (<= 12)"}},
      {"spacing_nm", {KeyKind::Number, 500.0, "lattice spacing [nm]"}},
      {"theta_deg", {KeyKind::Number, 90.0, "quantization axis vs chain [deg]"}},
      {"alpha_rad", {KeyKind::Number, 1.470628905633337, "Raman mixing angle"}},
      {"theta_mu_rad", {KeyKind::Number, 0.0, "microwave mixing angle"}},
      {"zz", {KeyKind::Flag, false, "enable the ZZ extension"}},
      {"eps_e_mhz", {KeyKind::Number, 0.0, "qubit gap [MHz]"}},
      {"emit_spectrum", {KeyKind::Flag, false, "emit the dense spectrum"}},
      // matchgate-check
      {"gate", {KeyKind::Text, std::string(""), "named gate: cnot|cz|swap|xx"}},
      {"matrix_csv", {KeyKind::Text, std::string(""), "4x4 matrix file (16 rows re,im)"}},
      {"xx_jt", {KeyKind::Number, 0.7853981633974483, "J*t for the named xx gate"}},
      {"tol", {KeyKind::Number, 1e-10, "matchgate acceptance tolerance"}},
      // feasibility
      {"r_nm", {KeyKind::Number, 500.0, "lattice separation [nm]"}},
      {"theta_pair_deg", {KeyKind::Number, 90.0, "pair angle Theta [deg]"}},
      {"d_debye", {KeyKind::Number, 0.0, "dipole override [D]; 0 -> species"}},
      {"delta_stirap", {KeyKind::Number, 0.1, "STIRAP residual delta"}},
      {"i_ls_w_cm2", {KeyKind::Number, 1.0e5, "near-IR intensity [W/cm^2]"}},
      {"t0_ns", {KeyKind::Number, 100.0, "mid-IR ramp width [ns]"}},
      {"d_vib_debye", {KeyKind::Number, 0.1, "vibrational transition dipole [D]"}},
      {"trap_freq_khz", {KeyKind::Number, 150.0, "trap frequency [kHz]"}},
      {"sigma_um", {KeyKind::Number, 2.0, "near-IR beam width [um]"}},
      {"omega_mu_khz", {KeyKind::Number, 0.0, "microwave Rabi frequency [kHz]"}},
      {"chirp_rate_khz_per_us", {KeyKind::Number, 0.0, "linear chirp rate [kHz/us]"}},
      // output
      {"out", {KeyKind::Text, std::string("molgate_out"), "output path base"}},
      {"emit_metadata", {KeyKind::Flag, true, "write the .meta.json sidecar"}},
      {"emit_gnuplot", {KeyKind::Flag, true, "write the gnuplot grid for sweeps"}},
  };
  return schema;
}

struct RunConfig {
  std::string subcommand;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> texts;
  std::map<std::string, bool> flags;
  std::set<std::string> from_file;     // keys explicitly set by the config file
  std::vector<std::string> conflicts;  // file values overridden by flags

  double num(const std::string& key) const {
    auto it = numbers.find(key);
    if (it == numbers.end()) throw ConfigError("unknown numeric key " + key);
    return it->second;
  }
  const std::string& text(const std::string& key) const {
    auto it = texts.find(key);
    if (it == texts.end()) throw ConfigError("unknown text key " + key);
    return it->second;
  }
  bool flag(const std::string& key) const {
    auto it = flags.find(key);
    if (it == flags.end()) throw ConfigError("unknown flag key " + key);
    return it->second;
  }
};

inline RunConfig default_config(std::string subcommand = "") {
  RunConfig cfg;
  cfg.subcommand = std::move(subcommand);
  for (const auto& [key, spec] : config_schema()) {
    switch (spec.kind) {
      case KeyKind::Number: cfg.numbers[key] = std::get<double>(spec.default_value); break;
      case KeyKind::Text: cfg.texts[key] = std::get<std::string>(spec.default_value); break;
      case KeyKind::Flag: cfg.flags[key] = std::get<bool>(spec.default_value); break;
    }
  }
  return cfg;
}

// Apply one key from JSON with schema/type validation.
inline void apply_json_key(RunConfig& cfg, const std::string& key,
                           const nlohmann::json& value) {
  const auto& schema = config_schema();
  auto it = schema.find(key);
  if (it == schema.end()) throw ConfigError("unknown config key \"" + key + "\"");
  switch (it->second.kind) {
    case KeyKind::Number:
      if (!value.is_number())
        throw ConfigError("config key \"" + key + "\" must be a number");
      cfg.numbers[key] = value.get<double>();
      break;
    case KeyKind::Text:
      if (!value.is_string())
        throw ConfigError("config key \"" + key + "\" must be a string");
      cfg.texts[key] = value.get<std::string>();
      break;
    case KeyKind::Flag:
      if (!value.is_boolean())
        throw ConfigError("config key \"" + key + "\" must be a boolean");
      cfg.flags[key] = value.get<bool>();
      break;
  }
}

inline RunConfig config_from_json(const nlohmann::json& j,
                                  std::string subcommand = "") {
  RunConfig cfg = default_config(std::move(subcommand));
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  std::vector<std::string> unknown;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!config_schema().count(it.key())) unknown.push_back(it.key());
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " \"" + k + "\"";
    throw ConfigError(msg);
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    apply_json_key(cfg, it.key(), it.value());
    cfg.from_file.insert(it.key());
  }
  return cfg;
}

// Parse "key=value" overrides (command-line --set). Values are interpreted
// per the schema type; flags accept true/false/1/0. Flag wins over the file
// value; the shadowed value is recorded in cfg.conflicts.
inline void apply_override(RunConfig& cfg, const std::string& spec_str) {
  const auto eq = spec_str.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key=value: " + spec_str);
  const std::string key = spec_str.substr(0, eq);
  const std::string value = spec_str.substr(eq + 1);
  const auto& schema = config_schema();
  auto it = schema.find(key);
  if (it == schema.end()) throw ConfigError("unknown config key \"" + key + "\"");
  switch (it->second.kind) {
    case KeyKind::Number: {
      std::size_t pos = 0;
      double x = 0.0;
      try {
        x = std::stod(value, &pos);
      } catch (const std::exception&) {
        throw ConfigError("key \"" + key + "\" needs a numeric value");
      }
      if (pos != value.size())
        throw ConfigError("key \"" + key + "\" needs a numeric value");
      if (cfg.from_file.count(key) && cfg.numbers[key] != x)
        cfg.conflicts.push_back(key + " overridden to " + value);
      cfg.numbers[key] = x;
      break;
    }
    case KeyKind::Text:
      if (cfg.from_file.count(key) && cfg.texts[key] != value)
        cfg.conflicts.push_back(key + " overridden to " + value);
      cfg.texts[key] = value;
      break;
    case KeyKind::Flag: {
      bool b;
      if (value == "true" || value == "1") b = true;
      else if (value == "false" || value == "0") b = false;
      else throw ConfigError("key \"" + key + "\" needs true/false");
      if (cfg.from_file.count(key) && cfg.flags[key] != b)
        cfg.conflicts.push_back(key + " overridden to " + value);
      cfg.flags[key] = b;
      break;
    }
  }
}

inline nlohmann::json serialize(const RunConfig& cfg) {
  nlohmann::json j;
  for (const auto& [k, v] : cfg.numbers) j[k] = v;
  for (const auto& [k, v] : cfg.texts) j[k] = v;
  for (const auto& [k, v] : cfg.flags) j[k] = v;
  return j;
}

// Reduced-unit gate scenario from a resolved config. j_t0 is
// interpreted against the configured T0, so the coupling in Omega0 units is
// j_t0 / t0_omega0.
inline GateScenario scenario_from_config(const RunConfig& cfg,
                                         double eta_resolved) {
  GateScenario sc;
  sc.t0_width = cfg.num("t0_omega0");
  sc.tau = cfg.num("tau_omega0");
  sc.sin_alpha0 = cfg.num("sin_alpha0");
  sc.beta = cfg.num("beta_rad");
  sc.delta_sum = cfg.num("delta_sum_omega0");
  sc.delta_diff = cfg.num("delta_diff_omega0");
  sc.j = cfg.num("j_t0") / cfg.num("t0_omega0");
  sc.tau_e = cfg.num("tau_e_omega0");
  sc.eps_e_hold = cfg.num("eps_e_hold_omega0");
  sc.eta = eta_resolved;
  sc.form = interaction_form_from(cfg.text("interaction_form"));
  sc.input_state = cfg.text("input_state");
  sc.instantaneous_transfer = cfg.flag("instantaneous");
  sc.dt = cfg.num("dt");
  const auto& stepper = cfg.text("stepper");
  if (stepper == "magnus4") sc.stepper = Stepper::Magnus4;
  else if (stepper == "midpoint") sc.stepper = Stepper::Midpoint;
  else throw ConfigError("stepper must be magnus4 or midpoint");
  return sc;
}

}  // namespace molgate
