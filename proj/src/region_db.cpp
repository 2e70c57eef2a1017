#include "geofd/region_db.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "geofd/error.hpp"
#include "geofd/propagation.hpp"

namespace geofd {

namespace {

constexpr const char* kDatabaseFormat = "geofd-isolation-db/1";

bool closed_disjoint(const Rect& a, const Rect& b) {
  return a.x_max < b.x_min || b.x_max < a.x_min || a.y_max < b.y_min || b.y_max < a.y_min;
}

bool crosses_any(Position p, Position q, const std::vector<Rect>& rects) {
  return std::any_of(rects.begin(), rects.end(),
                     [&](const Rect& r) { return segment_intersects(p, q, r); });
}

double interuser_loss(Position p, Position q, double carrier_mhz) {
  return ue_ue_pathloss(distance_m(p, q) / 1000.0, carrier_mhz);
}

}  // namespace

void validate(const ExtractionParams& p) {
  if (!std::isfinite(p.detection_threshold_db)) {
    throw ValidationError("detection threshold must be finite");
  }
  if (!(p.detection_threshold_db > 0.0) || !(p.band_width_m > 0.0) ||
      !(p.admission_threshold_db > 0.0) || !(p.sampling_step_m > 0.0)) {
    throw ValidationError("extraction parameters must be positive");
  }
  if (p.sampling_step_m > p.band_width_m) {
    throw ValidationError("sampling step must not exceed the band width");
  }
  if (p.split_count != 1 && p.split_count != 2) {
    throw ValidationError("split count must be 1 or 2");
  }
}

void validate(const IsolationDatabase& db) {
  for (std::size_t i = 0; i < db.pairs.size(); ++i) {
    const auto& pr = db.pairs[i];
    const std::string entry = "pair entry " + std::to_string(i + 1);
    if (pr.k != static_cast<int>(i) + 1) {
      throw ValidationError(entry + ": index k=" + std::to_string(pr.k) + ", expected " +
                            std::to_string(i + 1));
    }
    if (!pr.a.has_positive_area() || !pr.b.has_positive_area()) {
      throw ValidationError(entry + ": regions must have positive area");
    }
    if (!closed_disjoint(pr.a, pr.b)) {
      throw ValidationError(entry + ": regions A and B overlap");
    }
    if (!pr.alpha_db || !std::isfinite(*pr.alpha_db)) {
      throw ValidationError(entry + ": missing or non-finite alpha");
    }
    if (*pr.alpha_db < db.provenance.params.admission_threshold_db) {
      throw ValidationError(entry + ": alpha below the admission threshold");
    }
  }
}

AttenuationOracle penetration_oracle(std::vector<Rect> obstructions, double carrier_mhz,
                                     double penetration_db) {
  return [obs = std::move(obstructions), carrier_mhz, penetration_db](Position p, Position q) {
    double loss = interuser_loss(p, q, carrier_mhz);
    for (const auto& r : obs) {
      if (segment_intersects(p, q, r)) loss += penetration_db;
    }
    return loss;
  };
}

AttenuationOracle crossing_estimate_oracle(std::vector<Rect> obstructions, double carrier_mhz,
                                           double estimate_db) {
  return [obs = std::move(obstructions), carrier_mhz, estimate_db](Position p, Position q) {
    if (crosses_any(p, q, obs)) return estimate_db;
    return interuser_loss(p, q, carrier_mhz);
  };
}

std::vector<Obstruction> detect_obstructions(const RadioMap& map, double threshold_db) {
  const int nc = map.n_cols();
  const int nr = map.n_rows();
  std::vector<char> seen(static_cast<std::size_t>(nc) * nr, 0);
  auto idx = [nc](int c, int r) { return static_cast<std::size_t>(r) * nc + c; };
  std::vector<Obstruction> out;
  for (int r = 0; r < nr; ++r) {
    for (int c = 0; c < nc; ++c) {
      if (seen[idx(c, r)] || map.at(c, r) < threshold_db) continue;
      Obstruction obs;
      int c_lo = c, c_hi = c, r_lo = r, r_hi = r;
      std::queue<GridIndex> frontier;
      frontier.push({c, r});
      seen[idx(c, r)] = 1;
      while (!frontier.empty()) {
        const GridIndex g = frontier.front();
        frontier.pop();
        obs.pixels.push_back(g);
        c_lo = std::min(c_lo, g.col);
        c_hi = std::max(c_hi, g.col);
        r_lo = std::min(r_lo, g.row);
        r_hi = std::max(r_hi, g.row);
        const GridIndex next[4] = {
            {g.col + 1, g.row}, {g.col - 1, g.row}, {g.col, g.row + 1}, {g.col, g.row - 1}};
        for (const auto& n : next) {
          if (n.col < 0 || n.row < 0 || n.col >= nc || n.row >= nr) continue;
          if (seen[idx(n.col, n.row)] || map.at(n) < threshold_db) continue;
          seen[idx(n.col, n.row)] = 1;
          frontier.push(n);
        }
      }
      const Rect lo = map.pixel_rect(c_lo, r_lo);
      const Rect hi = map.pixel_rect(c_hi, r_hi);
      obs.bounds = {lo.x_min, hi.x_max, lo.y_min, hi.y_max};
      out.push_back(std::move(obs));
    }
  }
  return out;
}

std::vector<RegionPair> build_region_pairs(const Obstruction& obstruction,
                                           const ExtractionParams& params, const RadioMap& map) {
  validate(params);
  const Rect area = map.bounds();
  const Rect& o = obstruction.bounds;
  if (!o.has_positive_area() || o.x_min < area.x_min || o.x_max > area.x_max ||
      o.y_min < area.y_min || o.y_max > area.y_max) {
    throw ValidationError("obstruction " + to_string(o) + " is not inside the map " +
                          to_string(area));
  }
  const double d = params.band_width_m;
  const Rect north{o.x_min, o.x_max, o.y_max, std::min(area.y_max, o.y_max + d)};
  const Rect south{o.x_min, o.x_max, std::max(area.y_min, o.y_min - d), o.y_min};
  const Rect east{o.x_max, std::min(area.x_max, o.x_max + d), o.y_min, o.y_max};
  const Rect west{std::max(area.x_min, o.x_min - d), o.x_min, o.y_min, o.y_max};

  std::vector<RegionPair> out;
  auto emit = [&](const Rect& a, const Rect& b) {
    if (a.has_positive_area() && b.has_positive_area()) out.push_back({0, a, b, std::nullopt});
  };
  if (params.split_count == 1) {
    emit(north, south);
    emit(east, west);
    return out;
  }
  const double xm = 0.5 * (o.x_min + o.x_max);
  const double ym = 0.5 * (o.y_min + o.y_max);
  auto x_half = [](Rect r, double lo, double hi) {
    r.x_min = lo;
    r.x_max = hi;
    return r;
  };
  auto y_half = [](Rect r, double lo, double hi) {
    r.y_min = lo;
    r.y_max = hi;
    return r;
  };
  if (north.has_positive_area() && south.has_positive_area()) {
    emit(x_half(north, o.x_min, xm), x_half(south, o.x_min, xm));
    emit(x_half(north, xm, o.x_max), x_half(south, xm, o.x_max));
  }
  if (east.has_positive_area() && west.has_positive_area()) {
    emit(y_half(east, o.y_min, ym), y_half(west, o.y_min, ym));
    emit(y_half(east, ym, o.y_max), y_half(west, ym, o.y_max));
  }
  return out;
}

std::vector<double> lattice_axis(double lo, double hi, double step) {
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (!(v < hi)) break;
    out.push_back(v);
  }
  out.push_back(hi);
  return out;
}

double compute_mitigation_factor(const RegionPair& pair, const AttenuationOracle& attenuation,
                                 double step_m) {
  if (!(step_m > 0.0) || !std::isfinite(step_m)) {
    throw DomainError("sampling step must be positive and finite");
  }
  if (!pair.a.has_positive_area() || !pair.b.has_positive_area()) {
    throw ValidationError("region pair has a region without lattice points");
  }
  auto lattice = [step_m](const Region& r) {
    std::vector<Position> pts;
    const auto xs = lattice_axis(r.x_min, r.x_max, step_m);
    const auto ys = lattice_axis(r.y_min, r.y_max, step_m);
    pts.reserve(xs.size() * ys.size());
    for (double y : ys) {
      for (double x : xs) pts.push_back({x, y});
    }
    return pts;
  };
  const auto pa = lattice(pair.a);
  const auto pb = lattice(pair.b);
  double alpha = std::numeric_limits<double>::infinity();
  for (const auto& a : pa) {
    for (const auto& b : pb) alpha = std::min(alpha, attenuation(a, b));
  }
  return alpha;
}

IsolationDatabase build_database(const RadioMap& map, const ExtractionParams& params,
                                 const AttenuationOracle& attenuation, std::string oracle_label) {
  validate(params);
  IsolationDatabase db;
  db.provenance = {map_fingerprint(map), params, std::move(oracle_label)};
  for (const auto& obs : detect_obstructions(map, params.detection_threshold_db)) {
    for (auto pair : build_region_pairs(obs, params, map)) {
      const double alpha = compute_mitigation_factor(pair, attenuation, params.sampling_step_m);
      if (alpha < params.admission_threshold_db) continue;
      pair.alpha_db = alpha;
      pair.k = static_cast<int>(db.pairs.size()) + 1;
      db.pairs.push_back(pair);
    }
  }
  return db;
}

namespace {

nlohmann::ordered_json rect_json(const Rect& r) {
  nlohmann::ordered_json j;
  j["x_min"] = r.x_min;
  j["x_max"] = r.x_max;
  j["y_min"] = r.y_min;
  j["y_max"] = r.y_max;
  return j;
}

template <class T>
T required(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ParseError(where + ": field '" + key + "' must be an integer");
  } else {
    if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
  }
  return v.get<T>();
}

Rect parse_rect(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  const auto& r = obj.at(key);
  const std::string sub = where + " field '" + key + "'";
  return {required<double>(r, "x_min", sub), required<double>(r, "x_max", sub),
          required<double>(r, "y_min", sub), required<double>(r, "y_max", sub)};
}

}  // namespace

std::string format_database(const IsolationDatabase& db) {
  nlohmann::ordered_json j;
  j["format"] = kDatabaseFormat;
  auto& prov = j["provenance"];
  prov["map_id"] = db.provenance.map_id;
  prov["oracle"] = db.provenance.oracle;
  prov["detection_threshold_db"] = db.provenance.params.detection_threshold_db;
  prov["band_width_m"] = db.provenance.params.band_width_m;
  prov["admission_threshold_db"] = db.provenance.params.admission_threshold_db;
  prov["sampling_step_m"] = db.provenance.params.sampling_step_m;
  prov["split_count"] = db.provenance.params.split_count;
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : db.pairs) {
    nlohmann::ordered_json e;
    e["k"] = p.k;
    e["alpha_db"] = p.alpha_db ? nlohmann::ordered_json(*p.alpha_db) : nlohmann::ordered_json();
    e["a"] = rect_json(p.a);
    e["b"] = rect_json(p.b);
    j["pairs"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

IsolationDatabase parse_database(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("isolation database is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("isolation database must be a JSON object");
  if (required<std::string>(j, "format", "database") != kDatabaseFormat) {
    throw ParseError("database: unsupported format tag");
  }
  IsolationDatabase db;
  if (!j.contains("provenance")) throw ParseError("database: missing field 'provenance'");
  const auto& prov = j.at("provenance");
  const std::string pw = "provenance";
  db.provenance.map_id = required<std::string>(prov, "map_id", pw);
  db.provenance.oracle = required<std::string>(prov, "oracle", pw);
  db.provenance.params.detection_threshold_db = required<double>(prov, "detection_threshold_db", pw);
  db.provenance.params.band_width_m = required<double>(prov, "band_width_m", pw);
  db.provenance.params.admission_threshold_db = required<double>(prov, "admission_threshold_db", pw);
  db.provenance.params.sampling_step_m = required<double>(prov, "sampling_step_m", pw);
  db.provenance.params.split_count = required<int>(prov, "split_count", pw);
  if (!j.contains("pairs") || !j.at("pairs").is_array()) {
    throw ParseError("database: missing array field 'pairs'");
  }
  int entry = 0;
  for (const auto& e : j.at("pairs")) {
    ++entry;
    const std::string where = "pair entry " + std::to_string(entry);
    RegionPair p;
    p.k = required<int>(e, "k", where);
    if (!e.contains("alpha_db") || e.at("alpha_db").is_null()) {
      throw ParseError(where + ": missing field 'alpha_db'");
    }
    p.alpha_db = required<double>(e, "alpha_db", where);
    p.a = parse_rect(e, "a", where);
    p.b = parse_rect(e, "b", where);
    db.pairs.push_back(p);
  }
  validate(db);
  return db;
}

void save_database(const IsolationDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write database '" + path.string() + "'");
  out << format_database(db);
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

IsolationDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open database '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_database(ss.str());
}

}  // namespace geofd
