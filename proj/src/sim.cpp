#include "geofd/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "geofd/error.hpp"
#include "geofd/format.hpp"

namespace geofd {

namespace {

constexpr std::size_t kViews = 2;

std::size_t view_index(View v) { return v == View::whole_cell ? 0 : 1; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::hd: return "HD";
    case Scheme::fdrand: return "FDrand";
    case Scheme::fdregrand: return "FDregrand";
    case Scheme::fdreghdelse: return "FDregHDelse";
    case Scheme::optimal: return "Optimal";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  const std::string n = lower(name);
  for (Scheme s : {Scheme::hd, Scheme::fdrand, Scheme::fdregrand, Scheme::fdreghdelse,
                   Scheme::optimal}) {
    if (lower(to_string(s)) == n) return s;
  }
  throw ValidationError("unknown scheme '" + name +
                        "' (expected HD, FDrand, FDregrand, FDregHDelse or Optimal)");
}

bool is_full_duplex(Scheme s) { return s != Scheme::hd; }

std::string to_string(View v) { return v == View::whole_cell ? "whole" : "center"; }

void validate(const ScenarioConfig& cfg) {
  if (cfg.n_dl < 0 || cfg.n_ul < 0) throw ValidationError("user counts must be non-negative");
  if (!(cfg.min_spacing_m >= 0.0) || !std::isfinite(cfg.min_spacing_m)) {
    throw ValidationError("minimum spacing must be finite and non-negative");
  }
  if (cfg.area && !cfg.area->has_positive_area()) {
    throw ValidationError("placement area must have positive area");
  }
  if (cfg.placement_attempts_per_user < 1) {
    throw ValidationError("placement attempt budget must be at least 1");
  }
  if (cfg.trials < 1) throw ValidationError("trials must be at least 1");
  if (cfg.schemes.empty()) throw ValidationError("no schemes configured");
  if (!(cfg.cell_center_radius_m >= 0.0)) {
    throw ValidationError("cell-center radius must be non-negative");
  }
  validate(cfg.link);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t trial, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(campaign_seed) ^ trial) ^ (stream << 32));
}

std::vector<User> place_users(const ScenarioConfig& cfg, const RadioMap& map, Rng& rng) {
  validate(cfg);
  const Rect bounds = map.bounds();
  const Rect area = cfg.area.value_or(bounds);
  if (area.x_min < bounds.x_min || area.x_max > bounds.x_max || area.y_min < bounds.y_min ||
      area.y_max > bounds.y_max) {
    throw ValidationError("placement area " + to_string(area) + " exceeds the map " +
                          to_string(bounds));
  }

  std::vector<int> ids;
  {
    int dl = 0;
    int ul = 0;
    int next_odd = 1;
    int next_even = 2;
    while (dl < cfg.n_dl || ul < cfg.n_ul) {
      if (dl < cfg.n_dl) {
        ids.push_back(next_odd);
        next_odd += 2;
        ++dl;
      }
      if (ul < cfg.n_ul) {
        ids.push_back(next_even);
        next_even += 2;
        ++ul;
      }
    }
    std::sort(ids.begin(), ids.end());
  }

  std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
  std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
  const long long budget =
      static_cast<long long>(cfg.placement_attempts_per_user) * static_cast<long long>(ids.size());
  long long attempts = 0;
  std::vector<User> users;
  users.reserve(ids.size());
  for (int id : ids) {
    for (;;) {
      if (attempts++ >= budget) {
        throw PackingError("placed " + std::to_string(users.size()) + " of " +
                           std::to_string(ids.size()) + " users within " + std::to_string(budget) +
                           " attempts");
      }
      const double x = ux(rng);
      const double y = uy(rng);
      const Position p{x, y};
      if (cfg.obstruction_threshold_db && map.at(map.locate(p)) >= *cfg.obstruction_threshold_db) {
        continue;
      }
      const bool crowded = std::any_of(users.begin(), users.end(), [&](const User& u) {
        return distance_m(u.position, p) < cfg.min_spacing_m;
      });
      if (crowded) continue;
      User u{id, p, std::nullopt};
      if (!u.is_downlink()) u.tx_power_dbm = cfg.link.ue_tx_power_dbm;
      users.push_back(u);
      break;
    }
  }
  return users;
}

Assignment run_scheme(Scheme scheme, const std::vector<User>& users, const IsolationDatabase& db,
                      const ScenarioConfig& cfg, const RadioMap& map, Rng& rng) {
  switch (scheme) {
    case Scheme::hd: return schedule_hd(users, cfg.link, rng);
    case Scheme::fdrand: return schedule_fdrand(users, cfg.link, rng);
    case Scheme::fdregrand: return schedule_fdregrand(users, db, cfg.link, rng);
    case Scheme::fdreghdelse: return schedule_fdreghdelse(users, db, cfg.link, rng);
    case Scheme::optimal: return schedule_optimal(users, db, cfg.link, map, cfg.optimal);
  }
  throw ContractError("unhandled scheme");
}

std::vector<LinkMetrics> compute_link_metrics(const Assignment& a, const std::vector<User>& users,
                                              const IsolationDatabase& db,
                                              const LinkBudgetConfig& link, const RadioMap& map,
                                              double cell_center_radius_m) {
  std::unordered_map<int, const User*> by_id;
  for (const auto& u : users) by_id[u.id] = &u;
  auto user = [&](int id) -> const User& {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ContractError("assignment names unknown user " + std::to_string(id));
    return *it->second;
  };
  const Position bs = map.bs_position();
  auto central = [&](const User& u) { return distance_m(u.position, bs) <= cell_center_radius_m; };

  std::vector<LinkMetrics> out;
  out.reserve(users.size());
  for (const auto& s : a.slots) {
    const int sharing = s.user_count();
    const User* dl = s.dl_user ? &user(*s.dl_user) : nullptr;
    const User* ul = s.ul_user ? &user(*s.ul_user) : nullptr;
    const bool cc = (!dl || central(*dl)) && (!ul || central(*ul));
    const double p_ul = ul ? ul->tx_power_dbm.value_or(link.ue_tx_power_dbm) : 0.0;
    if (dl) {
      LinkMetrics m;
      m.user_id = dl->id;
      m.direction = Direction::downlink;
      m.resource = s.resource.index;
      m.mode = s.mode;
      m.noise_dbm = link.noise_dbm;
      m.signal_dbm = link.bs_tx_power_dbm - pathloss_at(map, dl->position);
      if (ul) {
        m.co_channel_user = ul->id;
        m.interference_dbm =
            interference_power(p_ul, dl->position, ul->position, db, s.resource.center_mhz);
      }
      m.sinr_db = sinr_db(m.signal_dbm, m.noise_dbm, m.interference_dbm);
      m.rate_density = rate_density(m.sinr_db);
      m.normalized_se = m.rate_density * sharing;
      m.cell_center = cc;
      out.push_back(m);
    }
    if (ul) {
      LinkMetrics m;
      m.user_id = ul->id;
      m.direction = Direction::uplink;
      m.resource = s.resource.index;
      m.mode = s.mode;
      if (dl) m.co_channel_user = dl->id;
      m.noise_dbm = link.noise_dbm;
      m.signal_dbm = p_ul - pathloss_at(map, ul->position);
      m.sinr_db = sinr_db(m.signal_dbm, m.noise_dbm, std::nullopt);
      m.rate_density = rate_density(m.sinr_db);
      m.normalized_se = m.rate_density * sharing;
      m.cell_center = cc;
      out.push_back(m);
    }
  }
  return out;
}

std::vector<TrialResult> run_trial(const ScenarioConfig& cfg, const RadioMap& map,
                                   const IsolationDatabase& db, int trial) {
  const auto t = static_cast<std::uint64_t>(trial);
  Rng drop(derive_seed(cfg.seed, t, 0));
  const std::vector<User> users = place_users(cfg, map, drop);
  std::vector<TrialResult> out;
  for (Scheme s : cfg.schemes) {
    Rng rng(derive_seed(cfg.seed, t, 1 + static_cast<std::uint64_t>(s)));
    TrialResult r;
    r.scheme = s;
    r.users = users;
    r.assignment = run_scheme(s, users, db, cfg, map, rng);
    r.links = compute_link_metrics(r.assignment, users, db, cfg.link, map,
                                   cfg.cell_center_radius_m);
    out.push_back(std::move(r));
  }
  return out;
}

CdfSeries::CdfSeries(std::vector<double> samples) : sorted_(std::move(samples)) {
  for (double v : sorted_) {
    if (std::isnan(v)) throw DomainError("CDF samples must not be NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double CdfSeries::query(double q) const {
  if (sorted_.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level outside [0, 1]");
  const double n = static_cast<double>(sorted_.size());
  const double h = q * n - 0.5;
  if (h <= 0.0) return sorted_.front();
  if (h >= n - 1.0) return sorted_.back();
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted_[lo];
  return sorted_[lo] + frac * (sorted_[lo + 1] - sorted_[lo]);
}

double CdfSeries::mass_at(double x) const {
  if (sorted_.empty()) return 0.0;
  auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

double CdfSeries::cdf(double x) const {
  if (sorted_.empty()) return 0.0;
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double CdfSeries::exceedance(double x) const {
  if (sorted_.empty()) return 0.0;
  return 1.0 - cdf(x);
}

CdfSeries CdfSeries::merged(const CdfSeries& other) const {
  CdfSeries out;
  out.sorted_.resize(sorted_.size() + other.sorted_.size());
  std::merge(sorted_.begin(), sorted_.end(), other.sorted_.begin(), other.sorted_.end(),
             out.sorted_.begin());
  return out;
}

CdfSeries compute_cdf(std::vector<double> samples) { return CdfSeries(std::move(samples)); }

const CdfSeries& SchemeReport::series(const std::string& metric, View v) const {
  const std::size_t i = view_index(v);
  if (metric == "interference") return interference[i];
  if (metric == "dl_se") return dl_se[i];
  if (metric == "combined_se") return combined_se[i];
  if (metric == "dl_rate") return dl_rate[i];
  throw ContractError("unknown metric '" + metric + "'");
}

const SchemeReport* CampaignReport::find(Scheme s) const {
  for (const auto& r : schemes) {
    if (r.scheme == s) return &r;
  }
  return nullptr;
}

namespace {

struct Samples {
  std::vector<double> interference[kViews];
  std::vector<double> dl_se[kViews];
  std::vector<double> combined_se[kViews];
  std::vector<double> dl_rate[kViews];
  double occupied_hz = 0.0;
  double fd_pairs = 0.0;

  void add(const TrialResult& r) {
    occupied_hz += r.assignment.occupied_bandwidth_hz();
    fd_pairs += r.assignment.full_duplex_count();
    for (const auto& m : r.links) {
      for (std::size_t v = 0; v < kViews; ++v) {
        if (v == 1 && !m.cell_center) continue;
        combined_se[v].push_back(m.normalized_se);
        if (m.direction != Direction::downlink) continue;
        dl_se[v].push_back(m.normalized_se);
        dl_rate[v].push_back(m.rate_density);
        if (m.interference_dbm) interference[v].push_back(*m.interference_dbm);
      }
    }
  }

  void append(Samples&& o) {
    auto cat = [](std::vector<double>& a, std::vector<double>& b) {
      a.insert(a.end(), b.begin(), b.end());
    };
    for (std::size_t v = 0; v < kViews; ++v) {
      cat(interference[v], o.interference[v]);
      cat(dl_se[v], o.dl_se[v]);
      cat(combined_se[v], o.combined_se[v]);
      cat(dl_rate[v], o.dl_rate[v]);
    }
    occupied_hz += o.occupied_hz;
    fd_pairs += o.fd_pairs;
  }
};

}  // namespace

CampaignReport run_campaign(const ScenarioConfig& cfg, const RadioMap& map,
                            const IsolationDatabase& db, unsigned threads) {
  validate(cfg);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials));

  const std::size_t n_schemes = cfg.schemes.size();
  std::vector<std::vector<Samples>> per_trial(static_cast<std::size_t>(cfg.trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        auto results = run_trial(cfg, map, db, t);
        std::vector<Samples> s(n_schemes);
        for (std::size_t i = 0; i < n_schemes; ++i) s[i].add(results[i]);
        per_trial[static_cast<std::size_t>(t)] = std::move(s);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CampaignReport report;
  report.bs_tx_power_dbm = cfg.link.bs_tx_power_dbm;
  report.noise_dbm = cfg.link.noise_dbm;
  report.trials = cfg.trials;
  if (!db.pairs.empty()) {
    double weakest = std::numeric_limits<double>::infinity();
    for (const auto& p : db.pairs) weakest = std::min(weakest, p.alpha_db.value_or(weakest));
    report.interference_floor_dbm = cfg.link.ue_tx_power_dbm - weakest;
  }
  for (std::size_t i = 0; i < n_schemes; ++i) {
    Samples all;
    for (auto& trial : per_trial) all.append(std::move(trial[i]));
    SchemeReport r;
    r.scheme = cfg.schemes[i];
    for (std::size_t v = 0; v < kViews; ++v) {
      r.interference[v] = CdfSeries(std::move(all.interference[v]));
      r.dl_se[v] = CdfSeries(std::move(all.dl_se[v]));
      r.combined_se[v] = CdfSeries(std::move(all.combined_se[v]));
      r.dl_rate[v] = CdfSeries(std::move(all.dl_rate[v]));
    }
    r.mean_occupied_bandwidth_hz = all.occupied_hz / cfg.trials;
    r.mean_full_duplex_pairs = all.fd_pairs / cfg.trials;
    report.schemes.push_back(std::move(r));
  }
  return report;
}

GainSummary gains(const CampaignReport& report) {
  auto ratio = [&](Scheme num, Scheme den, const char* metric, View v) -> std::optional<double> {
    const SchemeReport* a = report.find(num);
    const SchemeReport* b = report.find(den);
    if (!a || !b) return std::nullopt;
    const CdfSeries& sa = a->series(metric, v);
    const CdfSeries& sb = b->series(metric, v);
    if (sa.empty() || sb.empty() || sb.median() == 0.0) return std::nullopt;
    return sa.median() / sb.median();
  };
  GainSummary g;
  g.fdregrand_over_hd = ratio(Scheme::fdregrand, Scheme::hd, "combined_se", View::whole_cell);
  g.fdreghdelse_over_hd = ratio(Scheme::fdreghdelse, Scheme::hd, "combined_se", View::whole_cell);
  g.optimal_over_hd = ratio(Scheme::optimal, Scheme::hd, "combined_se", View::whole_cell);
  g.fdregrand_over_fdrand_dl = ratio(Scheme::fdregrand, Scheme::fdrand, "dl_se", View::whole_cell);
  g.fdregrand_over_fdrand_dl_cc =
      ratio(Scheme::fdregrand, Scheme::fdrand, "dl_se", View::cell_center);
  return g;
}

namespace {

std::string power_tag(double p) { return "p" + format_number(p) + "dBm"; }

nlohmann::ordered_json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::optional<double> median_of(const CdfSeries& s) {
  if (s.empty()) return std::nullopt;
  return s.median();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_cdf_files(const CampaignReport& report, const std::filesystem::path& dir) {
  for (const auto& s : report.schemes) {
    for (const auto& metric : kMetricNames) {
      for (View v : {View::whole_cell, View::cell_center}) {
        const CdfSeries& c = s.series(metric, v);
        if (c.empty()) continue;
        std::string text = metric + "\n";
        for (double x : c.samples()) {
          text += format_number(x);
          text += '\n';
        }
        write_text(dir / ("cdf_" + metric + "_" + to_string(s.scheme) + "_" + to_string(v) + "_" +
                          power_tag(report.bs_tx_power_dbm) + ".csv"),
                   text);
      }
    }
  }
}

std::string format_summary_json(const std::vector<CampaignReport>& reports) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["format"] = "geofd-summary/1";
  ordered_json runs = ordered_json::array();
  for (const auto& rep : reports) {
    ordered_json r;
    r["bs_tx_power_dbm"] = rep.bs_tx_power_dbm;
    r["trials"] = rep.trials;
    r["noise_dbm"] = rep.noise_dbm;
    r["interference_floor_dbm"] = number_or_null(rep.interference_floor_dbm);
    ordered_json schemes = ordered_json::object();
    for (const auto& s : rep.schemes) {
      ordered_json j;
      for (const auto& metric : kMetricNames) {
        ordered_json m;
        for (View v : {View::whole_cell, View::cell_center}) {
          const CdfSeries& c = s.series(metric, v);
          m[to_string(v)] = {{"samples", c.size()}, {"median", number_or_null(median_of(c))}};
        }
        j[metric] = m;
      }
      const CdfSeries& inter = s.interference[0];
      j["p_interference_above_noise"] =
          inter.empty() ? ordered_json(nullptr) : ordered_json(inter.exceedance(rep.noise_dbm));
      j["mass_at_interference_floor"] =
          inter.empty() || !rep.interference_floor_dbm
              ? ordered_json(nullptr)
              : ordered_json(inter.mass_at(*rep.interference_floor_dbm));
      j["mean_occupied_bandwidth_mhz"] = s.mean_occupied_bandwidth_hz / 1e6;
      j["mean_full_duplex_pairs"] = s.mean_full_duplex_pairs;
      schemes[to_string(s.scheme)] = j;
    }
    r["schemes"] = schemes;
    const GainSummary g = gains(rep);
    r["gains"] = {
        {"fdregrand_over_hd_combined_se", number_or_null(g.fdregrand_over_hd)},
        {"fdreghdelse_over_hd_combined_se", number_or_null(g.fdreghdelse_over_hd)},
        {"optimal_over_hd_combined_se", number_or_null(g.optimal_over_hd)},
        {"fdregrand_over_fdrand_dl_se_whole", number_or_null(g.fdregrand_over_fdrand_dl)},
        {"fdregrand_over_fdrand_dl_se_center", number_or_null(g.fdregrand_over_fdrand_dl_cc)},
    };
    runs.push_back(r);
  }
  root["runs"] = runs;
  return root.dump(2) + "\n";
}

std::string format_summary_text(const std::vector<CampaignReport>& reports) {
  std::string out;
  char line[256];
  auto cell = [](std::optional<double> v, const char* fmt) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  for (const auto& rep : reports) {
    std::snprintf(line, sizeof line, "BS power %s dBm, %d trials\n",
                  format_number(rep.bs_tx_power_dbm).c_str(), rep.trials);
    out += line;
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s %10s %10s\n", "scheme",
                  "med_all", "med_dl", "med_dl_cc", "med_I", "P(I>N)", "P(I=floor)");
    out += line;
    for (const auto& s : rep.schemes) {
      const CdfSeries& inter = s.interference[0];
      std::optional<double> p_exceed, p_floor;
      if (!inter.empty()) {
        p_exceed = inter.exceedance(rep.noise_dbm);
        if (rep.interference_floor_dbm) p_floor = inter.mass_at(*rep.interference_floor_dbm);
      }
      std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s %10s %10s\n",
                    to_string(s.scheme).c_str(), cell(median_of(s.combined_se[0]), "%.4f").c_str(),
                    cell(median_of(s.dl_se[0]), "%.4f").c_str(),
                    cell(median_of(s.dl_se[1]), "%.4f").c_str(),
                    cell(median_of(inter), "%.2f").c_str(), cell(p_exceed, "%.4f").c_str(),
                    cell(p_floor, "%.4f").c_str());
      out += line;
    }
    const GainSummary g = gains(rep);
    std::snprintf(line, sizeof line,
                  "gains: FDregrand/HD %s  FDregHDelse/HD %s  FDregrand/FDrand DL whole %s center "
                  "%s\n\n",
                  cell(g.fdregrand_over_hd, "%.3f").c_str(),
                  cell(g.fdreghdelse_over_hd, "%.3f").c_str(),
                  cell(g.fdregrand_over_fdrand_dl, "%.3f").c_str(),
                  cell(g.fdregrand_over_fdrand_dl_cc, "%.3f").c_str());
    out += line;
  }
  return out;
}

}  // namespace geofd
