#include "geofd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geofd/error.hpp"

namespace geofd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were used so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ParseError(where(key) + " must be a number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ParseError(where(key) + " must be an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = v.get<Int>();
        return;
      }
      if (v.get<long long>() < 0) throw ParseError(where(key) + " must be non-negative");
    }
    out = v.get<Int>();
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ParseError(where(key) + " must be true or false");
    out = v.get<bool>();
  }

  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ParseError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  void band(const std::string& key, Band& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ParseError(where(key) + " must be [low_mhz, high_mhz]");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.contains(key)) throw ParseError(path_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void read_map(const json& j, RunConfig& cfg) {
  Section s(j, "map");
  SyntheticMapSpec& m = cfg.map;
  s.number("origin_x_m", m.origin.x);
  s.number("origin_y_m", m.origin.y);
  s.number("width_m", m.width_m);
  s.number("height_m", m.height_m);
  s.number("pixel_size_m", m.pixel_size_m);
  s.number("bs_x_m", m.bs_position.x);
  s.number("bs_y_m", m.bs_position.y);
  s.number("exponent", m.exponent);
  s.number("carrier_mhz", m.carrier_mhz);
  s.number("antenna_height_m", cfg.antenna_height_m);
  if (const json* obs = s.child("obstructions")) {
    if (!obs->is_array()) throw ParseError("map.obstructions must be an array");
    m.obstructions.clear();
    int i = 0;
    for (const auto& o : *obs) {
      Section e(o, "map.obstructions[" + std::to_string(i++) + "]");
      PlantedObstruction p;
      for (const char* key : {"x_min", "x_max", "y_min", "y_max", "penetration_db"}) {
        if (!e.has(key)) throw ParseError(e.where(key) + " is required");
      }
      e.number("x_min", p.footprint.x_min);
      e.number("x_max", p.footprint.x_max);
      e.number("y_min", p.footprint.y_min);
      e.number("y_max", p.footprint.y_max);
      e.number("penetration_db", p.penetration_db);
      e.finish();
      m.obstructions.push_back(p);
    }
  }
  s.finish();
}

void read_extraction(const json& j, RunConfig& cfg) {
  Section s(j, "extraction");
  ExtractionParams& e = cfg.extraction;
  s.number("detection_threshold_db", e.detection_threshold_db);
  s.number("band_width_m", e.band_width_m);
  s.number("admission_threshold_db", e.admission_threshold_db);
  s.number("sampling_step_m", e.sampling_step_m);
  s.integer("split_count", e.split_count);
  std::string kind;
  s.string("oracle", kind);
  if (!kind.empty()) {
    if (kind == "penetration") {
      cfg.oracle.kind = OracleKind::penetration;
    } else if (kind == "crossing_estimate") {
      cfg.oracle.kind = OracleKind::crossing_estimate;
    } else {
      throw ParseError("extraction.oracle must be 'penetration' or 'crossing_estimate'");
    }
  }
  s.number("oracle_value_db", cfg.oracle.value_db);
  s.finish();
}

void read_link(const json& j, RunConfig& cfg) {
  Section s(j, "link");
  LinkBudgetConfig& l = cfg.link;
  s.number("noise_dbm", l.noise_dbm);
  s.number("ue_tx_power_dbm", l.ue_tx_power_dbm);
  s.band("dl_band_mhz", l.dl_band);
  s.band("ul_band_mhz", l.ul_band);
  s.number("resource_bandwidth_hz", l.resource_bandwidth_hz);
  s.finish();
}

void read_simulation(const json& j, RunConfig& cfg) {
  Section s(j, "simulation");
  SimulationConfig& c = cfg.simulation;
  s.integer("n_dl", c.n_dl);
  s.integer("n_ul", c.n_ul);
  s.number("min_spacing_m", c.min_spacing_m);
  s.boolean("exclude_obstructions", c.exclude_obstructions);
  s.integer("placement_attempts_per_user", c.placement_attempts_per_user);
  s.integer("trials", c.trials);
  s.number("cell_center_radius_m", c.cell_center_radius_m);
  s.boolean("per_resource_carrier", c.per_resource_carrier);
  if (const json* v = s.child("schemes")) {
    if (!v->is_array()) throw ParseError("simulation.schemes must be an array of names");
    c.schemes.clear();
    for (const auto& name : *v) {
      if (!name.is_string()) throw ParseError("simulation.schemes must be an array of names");
      try {
        c.schemes.push_back(parse_scheme(name.get<std::string>()));
      } catch (const ValidationError& e) {
        throw ParseError(std::string("simulation.schemes: ") + e.what());
      }
    }
  }
  if (const json* v = s.child("bs_tx_powers_dbm")) {
    if (!v->is_array()) throw ParseError("simulation.bs_tx_powers_dbm must be an array");
    c.bs_tx_powers_dbm.clear();
    for (const auto& p : *v) {
      if (!p.is_number()) throw ParseError("simulation.bs_tx_powers_dbm must hold numbers");
      c.bs_tx_powers_dbm.push_back(p.get<double>());
    }
  }
  s.finish();
}

}  // namespace

std::string to_string(OracleKind k) {
  return k == OracleKind::penetration ? "penetration" : "crossing_estimate";
}

std::string oracle_label(const OracleConfig& oracle) {
  std::ostringstream os;
  os << to_string(oracle.kind) << ':' << oracle.value_db;
  return os.str();
}

void validate(const RunConfig& cfg) {
  validate(cfg.map);
  validate(cfg.extraction);
  validate(cfg.link);
  if (!std::isfinite(cfg.oracle.value_db)) throw ValidationError("oracle value must be finite");
  const SimulationConfig& s = cfg.simulation;
  if (s.bs_tx_powers_dbm.empty()) throw ValidationError("no BS transmit powers configured");
  for (double p : s.bs_tx_powers_dbm) {
    validate(scenario_for(cfg, p));
  }
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section root(j, "config");
  root.integer("seed", cfg.seed);
  if (const json* v = root.child("map")) read_map(*v, cfg);
  if (const json* v = root.child("extraction")) read_extraction(*v, cfg);
  if (const json* v = root.child("link")) read_link(*v, cfg);
  if (const json* v = root.child("simulation")) read_simulation(*v, cfg);
  root.finish();
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str());
}

std::string format_run_config(const RunConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  auto& m = j["map"];
  m["origin_x_m"] = cfg.map.origin.x;
  m["origin_y_m"] = cfg.map.origin.y;
  m["width_m"] = cfg.map.width_m;
  m["height_m"] = cfg.map.height_m;
  m["pixel_size_m"] = cfg.map.pixel_size_m;
  m["bs_x_m"] = cfg.map.bs_position.x;
  m["bs_y_m"] = cfg.map.bs_position.y;
  m["exponent"] = cfg.map.exponent;
  m["carrier_mhz"] = cfg.map.carrier_mhz;
  m["antenna_height_m"] = cfg.antenna_height_m;
  m["obstructions"] = ordered_json::array();
  for (const auto& o : cfg.map.obstructions) {
    m["obstructions"].push_back({{"x_min", o.footprint.x_min},
                                 {"x_max", o.footprint.x_max},
                                 {"y_min", o.footprint.y_min},
                                 {"y_max", o.footprint.y_max},
                                 {"penetration_db", o.penetration_db}});
  }
  auto& e = j["extraction"];
  e["detection_threshold_db"] = cfg.extraction.detection_threshold_db;
  e["band_width_m"] = cfg.extraction.band_width_m;
  e["admission_threshold_db"] = cfg.extraction.admission_threshold_db;
  e["sampling_step_m"] = cfg.extraction.sampling_step_m;
  e["split_count"] = cfg.extraction.split_count;
  e["oracle"] = to_string(cfg.oracle.kind);
  e["oracle_value_db"] = cfg.oracle.value_db;
  auto& l = j["link"];
  l["noise_dbm"] = cfg.link.noise_dbm;
  l["ue_tx_power_dbm"] = cfg.link.ue_tx_power_dbm;
  l["dl_band_mhz"] = {cfg.link.dl_band.low_mhz, cfg.link.dl_band.high_mhz};
  l["ul_band_mhz"] = {cfg.link.ul_band.low_mhz, cfg.link.ul_band.high_mhz};
  l["resource_bandwidth_hz"] = cfg.link.resource_bandwidth_hz;
  auto& s = j["simulation"];
  const SimulationConfig& sim = cfg.simulation;
  s["n_dl"] = sim.n_dl;
  s["n_ul"] = sim.n_ul;
  s["min_spacing_m"] = sim.min_spacing_m;
  s["exclude_obstructions"] = sim.exclude_obstructions;
  s["placement_attempts_per_user"] = sim.placement_attempts_per_user;
  s["schemes"] = ordered_json::array();
  for (Scheme sc : sim.schemes) s["schemes"].push_back(to_string(sc));
  s["trials"] = sim.trials;
  s["bs_tx_powers_dbm"] = sim.bs_tx_powers_dbm;
  s["cell_center_radius_m"] = sim.cell_center_radius_m;
  s["per_resource_carrier"] = sim.per_resource_carrier;
  return j.dump(2) + "\n";
}

AttenuationOracle make_oracle(const RunConfig& cfg, const RadioMap& map) {
  std::vector<Rect> rects;
  for (const auto& o : detect_obstructions(map, cfg.extraction.detection_threshold_db)) {
    rects.push_back(o.bounds);
  }
  const double carrier = cfg.link.shared_carrier_mhz();
  if (cfg.oracle.kind == OracleKind::penetration) {
    return penetration_oracle(std::move(rects), carrier, cfg.oracle.value_db);
  }
  return crossing_estimate_oracle(std::move(rects), carrier, cfg.oracle.value_db);
}

ScenarioConfig scenario_for(const RunConfig& cfg, double bs_tx_power_dbm) {
  const SimulationConfig& s = cfg.simulation;
  ScenarioConfig sc;
  sc.n_dl = s.n_dl;
  sc.n_ul = s.n_ul;
  sc.min_spacing_m = s.min_spacing_m;
  if (s.exclude_obstructions) {
    sc.obstruction_threshold_db = cfg.extraction.detection_threshold_db;
  } else {
    sc.obstruction_threshold_db.reset();
  }
  sc.placement_attempts_per_user = s.placement_attempts_per_user;
  sc.schemes = s.schemes;
  sc.trials = s.trials;
  sc.seed = cfg.seed;
  sc.cell_center_radius_m = s.cell_center_radius_m;
  sc.optimal.per_resource_carrier = s.per_resource_carrier;
  sc.link = cfg.link;
  sc.link.bs_tx_power_dbm = bs_tx_power_dbm;
  return sc;
}

}  // namespace geofd
