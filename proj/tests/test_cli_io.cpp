#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>

#include "molgate/config.hpp"
#include "molgate/io.hpp"

using namespace molgate;
using Catch::Approx;
using nlohmann::json;

TEST_CASE("config: defaults resolve the reference gate parameters") {
  const auto cfg = default_config("gate");
  REQUIRE(cfg.num("j_t0") == 0.02);
  REQUIRE(cfg.num("t0_omega0") == 20.0);
  REQUIRE(cfg.num("tau_omega0") == 40.0);
  REQUIRE(cfg.num("sin_alpha0") == 0.995);

  const auto sc = scenario_from_config(cfg, 0.005);
  REQUIRE(sc.j == Approx(0.001));
  REQUIRE(sc.t0_width == 20.0);
  REQUIRE(sc.eta == 0.005);
  REQUIRE(sc.hold_duration() == Approx(units::pi / 0.004));
}

TEST_CASE("config: round trip through serialization") {
  auto cfg = default_config("sweep");
  cfg.numbers["axis1_points"] = 7;
  cfg.texts["species"] = "CaF";
  cfg.flags["zz"] = true;
  const auto j = serialize(cfg);
  const auto back = config_from_json(j, "sweep");
  REQUIRE(back.numbers == cfg.numbers);
  REQUIRE(back.texts == cfg.texts);
  REQUIRE(back.flags == cfg.flags);
}

TEST_CASE("config: unknown keys rejected by name") {
  json j{{"foo", 1.0}, {"t0_omega0", 20.0}};
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(std::string(e.what()).find("\"foo\"") != std::string::npos);
  }
  // Type mismatches are named too.
  REQUIRE_THROWS_AS(config_from_json(json{{"t0_omega0", "twenty"}}), ConfigError);
  REQUIRE_THROWS_AS(config_from_json(json{{"species", 3.0}}), ConfigError);
  REQUIRE_THROWS_AS(config_from_json(json::array()), ConfigError);
}

TEST_CASE("config: overrides win over file values, conflicts logged") {
  auto cfg = config_from_json(json{{"b_gauss", 4000.0}, {"species", "SrF"}});
  apply_override(cfg, "b_gauss=4500");
  apply_override(cfg, "n_max=2");  // default, not from file: no conflict entry
  REQUIRE(cfg.num("b_gauss") == 4500.0);
  REQUIRE(cfg.num("n_max") == 2.0);
  REQUIRE(cfg.conflicts.size() == 1);
  REQUIRE(cfg.conflicts[0].find("b_gauss") != std::string::npos);

  REQUIRE_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
  REQUIRE_THROWS_AS(apply_override(cfg, "bogus_key=1"), ConfigError);
  REQUIRE_THROWS_AS(apply_override(cfg, "b_gauss=abc"), ConfigError);
  REQUIRE_THROWS_AS(apply_override(cfg, "zz=maybe"), ConfigError);
  apply_override(cfg, "zz=true");
  REQUIRE(cfg.flag("zz"));
}

TEST_CASE("io: deterministic formatting and stable hash") {
  REQUIRE(io::format_double(0.1) == "0.1");
  REQUIRE(io::format_double(1.0 / 3.0) == "0.333333333333");
  // FNV-1a 64 of "molgate" frozen.
  REQUIRE(io::hash_hex("molgate") == io::hash_hex("molgate"));
  REQUIRE(io::hash_hex("molgate") != io::hash_hex("molgate2"));
  REQUIRE(io::hash_hex("") == "cbf29ce484222325");
}

TEST_CASE("io: atomic write and read back") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "molgate_io_test";
  fs::remove_all(dir);
  const auto path = (dir / "nested" / "file.txt").string();
  io::atomic_write_text(path, "hello\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  REQUIRE(content == "hello\n");
  REQUIRE_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("io: spectrum CSV golden shape and parse-back") {
  std::vector<SpectrumRow> rows = {
      {100.0, 0, -7.25, "v0;N0;M0;dn"},
      {100.0, 1, 7.25, "v0;N0;M0;up"},
  };
  const auto text = io::spectrum_csv(rows);
  const auto cells = io::parse_csv(text);
  REQUIRE(cells.size() == 3);
  REQUIRE(cells[0] ==
          std::vector<std::string>{"B_gauss", "state_index", "energy_MHz",
                                   "dominant_label"});
  REQUIRE(std::stod(cells[1][0]) == 100.0);
  REQUIRE(std::stod(cells[2][2]) == Approx(7.25));
  REQUIRE(cells[1][3] == "v0;N0;M0;dn");
  // Determinism: identical input, identical bytes.
  REQUIRE(io::spectrum_csv(rows) == text);
}

TEST_CASE("io: fidelity map CSV has one row per cell plus header") {
  FidelityMap map;
  map.axis1 = AxisSpec::linspace("delta_diff", -1.0, 1.0, 3);
  map.axis2 = AxisSpec::linspace("delta_sum", 0.0, 2.0, 3);
  map.fidelity.setConstant(3, 3, 0.5);
  map.leakage.setConstant(3, 3, 0.25);
  map.fidelity(1, 2) = 0.75;
  const auto text = io::fidelity_map_csv(map);
  const auto cells = io::parse_csv(text);
  REQUIRE(cells.size() == 10);  // header + 9 cells
  REQUIRE(cells[0][0] == "delta_diff");
  // Row-major ordering: cell (1,2) is line 1 + 1*3 + 2.
  REQUIRE(std::stod(cells[6][2]) == Approx(0.75));
  // Parse-back equality for every value.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto& row = cells[1 + i * 3 + j];
      REQUIRE(std::stod(row[0]) == Approx(map.axis1.values[i]));
      REQUIRE(std::stod(row[1]) == Approx(map.axis2.values[j]));
      REQUIRE(std::stod(row[2]) == Approx(map.fidelity(i, j)));
      REQUIRE(std::stod(row[3]) == Approx(map.leakage(i, j)));
    }

  const auto gp = io::fidelity_map_gnuplot(map);
  int blanks = 0;
  for (std::size_t k = 0; k + 1 < gp.size(); ++k)
    if (gp[k] == '\n' && gp[k + 1] == '\n') ++blanks;
  REQUIRE(blanks == 2);  // block separator between axis1 rows
}

TEST_CASE("io: stirap CSV columns") {
  std::vector<StirapPoint> traj = {{0.0, 1.0, 0.0, 0.0, 0.0, 0.1}};
  const auto cells = io::parse_csv(io::stirap_csv(traj));
  REQUIRE(cells[0] == std::vector<std::string>{"t", "pop_g", "pop_gp", "pop_f",
                                               "pop_e", "mixing_angle"});
  REQUIRE(cells.size() == 2);
}

TEST_CASE("io: 4x4 matrix file round trip") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "molgate_mat.csv").string();
  std::ostringstream text;
  text << "re,im\n";
  const Matrix m = xx_gate(1.0, 0.3).entries;
  for (int k = 0; k < 16; ++k)
    text << io::format_double(m(k / 4, k % 4).real()) << ','
         << io::format_double(m(k / 4, k % 4).imag()) << '\n';
  io::atomic_write_text(path, text.str());
  const Matrix back = io::read_matrix4_csv(path);
  REQUIRE((back - m).cwiseAbs().maxCoeff() < 1e-12);
  fs::remove(path);

  io::atomic_write_text(path, "re,im\n1,0\n");
  REQUIRE_THROWS_AS(io::read_matrix4_csv(path), IoError);
  fs::remove(path);
}

TEST_CASE("config: docs/config.schema.json stays in sync with the schema table") {
  const std::string path = std::string(MOLGATE_DATA_DIR) + "/../docs/config.schema.json";
  std::ifstream in(path);
  REQUIRE(in.good());
  const auto doc = json::parse(in);
  REQUIRE(doc["additionalProperties"] == false);
  const auto& props = doc["properties"];
  REQUIRE(props.size() == config_schema().size());
  for (const auto& [key, spec] : config_schema()) {
    INFO("key: " << key);
    REQUIRE(props.contains(key));
    const std::string type = props[key]["type"];
    switch (spec.kind) {
      case KeyKind::Number:
        REQUIRE(type == "number");
        REQUIRE(props[key]["default"].get<double>() ==
                std::get<double>(spec.default_value));
        break;
      case KeyKind::Text: REQUIRE(type == "string"); break;
      case KeyKind::Flag: REQUIRE(type == "boolean"); break;
    }
  }
}

TEST_CASE("io: metadata JSON carries the failed-cell log") {
  FidelityMap map;
  map.axis1 = {"j", {1e-3, 0.0}};
  map.axis2 = {"delta_sum", {0.0}};
  map.fidelity.setConstant(2, 1, 1.0);
  map.leakage.setConstant(2, 1, 0.0);
  map.meta.fidelity_kind = "rotating";
  map.meta.workers = 2;
  map.meta.failed_cells = {{1, 0}};
  map.meta.errors = {"GateScenario: j must be nonzero"};
  const auto j = io::sweep_metadata_json(map);
  REQUIRE(j["failed_cells"].size() == 1);
  REQUIRE(j["failed_cells"][0]["i"] == 1);
  REQUIRE(j["workers"] == 2);
}
