#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geofd/cli.hpp"
#include "geofd/config.hpp"
#include "geofd/error.hpp"

using namespace geofd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("geofd_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults follow the parameter table") {
  const RunConfig cfg = parse_run_config("{}");
  CHECK(cfg.link.noise_dbm == -100);
  CHECK(cfg.link.ue_tx_power_dbm == 20);
  CHECK(cfg.link.dl_band == Band{2100, 2180});
  CHECK(cfg.link.ul_band == Band{1900, 1980});
  CHECK(cfg.link.resource_bandwidth_hz == 400e3);
  CHECK(cfg.simulation.n_dl == 200);
  CHECK(cfg.simulation.n_ul == 200);
  CHECK(cfg.simulation.bs_tx_powers_dbm == std::vector<double>{46, 20});
  CHECK(cfg.simulation.cell_center_radius_m == 300);
  CHECK(cfg.map.width_m == 1050);
  CHECK(cfg.map.height_m == 1100);
  CHECK(cfg.map.pixel_size_m == 50);
  CHECK(cfg.antenna_height_m == 10);
}

TEST_CASE("resolved config round-trips") {
  const RunConfig cfg = load_run_config(fs::path(GEOFD_SOURCE_DIR) / "configs/reference_scene.json");
  const std::string text = format_run_config(cfg);
  CHECK(format_run_config(parse_run_config(text)) == text);
  CHECK(cfg.map.obstructions.size() == 2);
  CHECK(cfg.oracle.kind == OracleKind::crossing_estimate);
  CHECK(cfg.oracle.value_db == 140);
  const ScenarioConfig sc = scenario_for(cfg, 20);
  CHECK(sc.link.bs_tx_power_dbm == 20);
  CHECK(sc.seed == cfg.seed);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_run_config("{\"sed\": 1}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{\"link\": {\"noise\": -90}}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{\"link\": {\"noise_dbm\": \"loud\"}}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{\"simulation\": {\"schemes\": [\"TDD\"]}}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{\"simulation\": {\"trials\": 0}}"), ValidationError);
  CHECK_THROWS_AS(parse_run_config("{\"extraction\": {\"split_count\": 3}}"), ValidationError);
  CHECK_THROWS_AS(parse_run_config("{\"seed\": -1}"), ParseError);
  CHECK_THROWS_AS(parse_run_config("[1]"), ParseError);
  CHECK_THROWS_AS(parse_run_config("{"), ParseError);
  CHECK_THROWS_AS(
      parse_run_config("{\"map\": {\"obstructions\": [{\"x_min\": 0, \"x_max\": 100}]}}"),
      ParseError);
  try {
    parse_run_config("{\"map\": {\"widht_m\": 3}}");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("widht_m") != std::string::npos);
  }
}

TEST_CASE("gen-map and build-db commands") {
  const fs::path dir = fresh_dir("cmds");
  cli::CommonOptions opts;
  opts.config = fs::path(GEOFD_SOURCE_DIR) / "configs/reference_scene.json";
  opts.out = dir;
  std::ostringstream log, warn;
  cli::gen_map(opts, log);
  CHECK(log.str().find("21x22") != std::string::npos);
  const std::string first = slurp(dir / cli::kMapFile);
  cli::gen_map(opts, log);
  CHECK(slurp(dir / cli::kMapFile) == first);
  CHECK(fs::exists(dir / cli::kResolvedConfigFile));

  cli::build_db(opts, dir / cli::kMapFile, log, warn);
  const IsolationDatabase db = load_database(dir / cli::kDatabaseFile);
  CHECK(db.size() == 8);
  CHECK(warn.str().empty());

  SUBCASE("missing output directory leaves nothing behind") {
    cli::CommonOptions bad = opts;
    bad.out = dir / "nope";
    CHECK_THROWS(cli::gen_map(bad, log));
    CHECK_FALSE(fs::exists(dir / "nope"));
  }
  SUBCASE("threshold too high gives an empty database and a warning") {
    const fs::path cfg_path = dir / "high.json";
    std::ofstream(cfg_path) << "{\"extraction\": {\"detection_threshold_db\": 500}}";
    cli::CommonOptions high = opts;
    high.config = cfg_path;
    const fs::path out = dir / "high";
    fs::create_directories(out);
    high.out = out;
    std::ostringstream w;
    cli::build_db(high, dir / cli::kMapFile, log, w);
    CHECK(load_database(out / cli::kDatabaseFile).pairs.empty());
    CHECK(w.str().find("warning") != std::string::npos);
  }
  SUBCASE("corrupt map") {
    std::ofstream(dir / "bad.txt") << "0 0\n50\n2 2\n0 0\n1 2\n3\n";
    CHECK_THROWS_AS(cli::build_db(opts, dir / "bad.txt", log, warn), ParseError);
  }
  SUBCASE("schedule exports one drop") {
    cli::ScheduleOptions s{dir / cli::kMapFile, dir / cli::kDatabaseFile, "FDregHDelse"};
    std::ostringstream out;
    cli::schedule(opts, s, out);
    CHECK(out.str().find("0 constraint violations") != std::string::npos);
    const std::string csv = slurp(dir / "assignment.csv");
    CHECK(csv.rfind("resource,band,center_mhz,mode,dl_user,ul_user\n", 0) == 0);
    CHECK(csv.find("HD-UL") != std::string::npos);
  }
}
