#include "geofd/cli.hpp"

#include <fstream>
#include <ostream>

#include "geofd/config.hpp"
#include "geofd/error.hpp"
#include "geofd/format.hpp"
#include "geofd/radio_map.hpp"
#include "geofd/region_db.hpp"
#include "geofd/scheduler.hpp"
#include "geofd/sim.hpp"

namespace geofd::cli {

namespace fs = std::filesystem;

namespace {

RunConfig resolve(const CommonOptions& opts) {
  RunConfig cfg = opts.config ? load_run_config(*opts.config) : RunConfig{};
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

void require_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("output directory " + dir.string() + " does not exist");
  }
}

// Writes to a sibling temp file and renames it into place.
void write_whole(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  fs::rename(tmp, path);
}

void echo_config(const RunConfig& cfg, const fs::path& dir) {
  write_whole(dir / kResolvedConfigFile, format_run_config(cfg));
}

}  // namespace

void gen_map(const CommonOptions& opts, std::ostream& log) {
  const RunConfig cfg = resolve(opts);
  require_dir(opts.out);
  const RadioMap map = generate_synthetic_map(cfg.map, cfg.seed);
  const fs::path path = opts.out / kMapFile;
  write_whole(path, format_radio_map(map));
  echo_config(cfg, opts.out);
  log << "map " << map.n_cols() << "x" << map.n_rows() << " pixels of "
      << format_number(map.pixel_size()) << " m -> " << path.string() << "\n";
}

void build_db(const CommonOptions& opts, const fs::path& map_path, std::ostream& log,
              std::ostream& warn) {
  const RunConfig cfg = resolve(opts);
  require_dir(opts.out);
  const RadioMap map = load_radio_map(map_path);
  const IsolationDatabase db =
      build_database(map, cfg.extraction, make_oracle(cfg, map), oracle_label(cfg.oracle));
  const fs::path path = opts.out / kDatabaseFile;
  write_whole(path, format_database(db));
  echo_config(cfg, opts.out);
  if (db.pairs.empty()) warn << "warning: no region pair passed the thresholds\n";
  log << "K = " << db.size() << "\n";
  for (const auto& p : db.pairs) {
    log << "  k=" << p.k << " alpha=" << format_number(*p.alpha_db) << " dB  A=" << to_string(p.a)
        << "  B=" << to_string(p.b) << "\n";
  }
  log << "-> " << path.string() << "\n";
}

void simulate(const CommonOptions& opts, const SimulateOptions& sim, std::ostream& log) {
  RunConfig cfg = resolve(opts);
  if (sim.trials) cfg.simulation.trials = *sim.trials;
  if (!sim.schemes.empty()) {
    cfg.simulation.schemes.clear();
    for (const auto& s : sim.schemes) cfg.simulation.schemes.push_back(parse_scheme(s));
  }
  validate(cfg);
  require_dir(opts.out);
  const RadioMap map = load_radio_map(sim.map);
  const IsolationDatabase db = load_database(sim.db);

  std::vector<CampaignReport> reports;
  for (double power : cfg.simulation.bs_tx_powers_dbm) {
    reports.push_back(run_campaign(scenario_for(cfg, power), map, db, opts.threads));
  }
  for (const auto& r : reports) write_cdf_files(r, opts.out);
  const std::string text = format_summary_text(reports);
  write_whole(opts.out / "summary.json", format_summary_json(reports));
  write_whole(opts.out / "summary.txt", text);
  echo_config(cfg, opts.out);
  log << text;
}

void schedule(const CommonOptions& opts, const ScheduleOptions& sched, std::ostream& log) {
  const RunConfig cfg = resolve(opts);
  require_dir(opts.out);
  const RadioMap map = load_radio_map(sched.map);
  const IsolationDatabase db = load_database(sched.db);
  const Scheme scheme = parse_scheme(sched.scheme);
  ScenarioConfig sc = scenario_for(cfg, cfg.simulation.bs_tx_powers_dbm.front());
  sc.schemes = {scheme};
  const TrialResult r = run_trial(sc, map, db, 0).front();

  std::string users = "id,direction,x_m,y_m\n";
  for (const auto& u : r.users) {
    users += std::to_string(u.id) + (u.is_downlink() ? ",DL," : ",UL,") +
             format_number(u.position.x) + "," + format_number(u.position.y) + "\n";
  }
  write_whole(opts.out / "users.csv", users);
  write_whole(opts.out / "assignment.csv", format_assignment_csv(r.assignment));
  echo_config(cfg, opts.out);
  const auto violations = constraint_violations(r.assignment, r.users);
  log << to_string(scheme) << ": " << r.assignment.slots.size() << " resources, "
      << r.assignment.full_duplex_count() << " full duplex, "
      << format_number(r.assignment.occupied_bandwidth_hz() / 1e6) << " MHz, "
      << violations.size() << " constraint violations\n";
}

}  // namespace geofd::cli
