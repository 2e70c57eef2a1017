#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geofd/propagation.hpp"
#include "geofd/radio_map.hpp"
#include "geofd/region_db.hpp"
#include "geofd/scheduler.hpp"

namespace geofd {

enum class Scheme { hd, fdrand, fdregrand, fdreghdelse, optimal };

std::string to_string(Scheme s);
// Accepts the display names (HD, FDrand, ...), case-insensitive.
Scheme parse_scheme(const std::string& name);
bool is_full_duplex(Scheme s);

struct ScenarioConfig {
  int n_dl = 200;
  int n_ul = 200;
  // Defaults to the map bounds.
  std::optional<Rect> area;
  double min_spacing_m = 1.0;
  // Pixels at or above this loss are obstruction interiors and stay empty.
  // Unset disables the exclusion.
  std::optional<double> obstruction_threshold_db = 120.0;
  int placement_attempts_per_user = 10000;
  std::vector<Scheme> schemes{Scheme::hd, Scheme::fdrand, Scheme::fdregrand,
                              Scheme::fdreghdelse};
  int trials = 100;
  std::uint64_t seed = 1;
  double cell_center_radius_m = 300.0;
  OptimalOptions optimal;
  // Carries the BS power used by the campaign.
  LinkBudgetConfig link;
};

void validate(const ScenarioConfig& cfg);

/// Per-link quantities. interference_dbm is absent on links without a
/// co-channel transmitter (HD, and UL under perfect self-interference
/// cancellation).
struct LinkMetrics {
  int user_id = 0;
  Direction direction = Direction::downlink;
  int resource = 0;
  DuplexMode mode = DuplexMode::full_duplex;
  std::optional<int> co_channel_user;
  double signal_dbm = 0.0;
  double noise_dbm = 0.0;
  std::optional<double> interference_dbm;
  double sinr_db = 0.0;
  double rate_density = 0.0;
  // rate_density times the number of users on the resource.
  double normalized_se = 0.0;
  // The user and its co-channel partner, if any, lie within the center radius.
  bool cell_center = false;
};

// Trial and stream seeds: splitmix64 over (campaign seed, trial, stream).
// Stream 0 draws the user drop; scheme s uses stream 1 + int(s).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t campaign_seed, std::uint64_t trial, std::uint64_t stream);

// Ids 1, 2, 3, ... alternate DL/UL while both directions have users left;
// the remaining direction continues on its own parity. Users are placed in id
// order by rejection sampling.
std::vector<User> place_users(const ScenarioConfig& cfg, const RadioMap& map, Rng& rng);

Assignment run_scheme(Scheme scheme, const std::vector<User>& users, const IsolationDatabase& db,
                      const ScenarioConfig& cfg, const RadioMap& map, Rng& rng);

// UE-to-UE losses are evaluated at each resource's center frequency.
std::vector<LinkMetrics> compute_link_metrics(const Assignment& a, const std::vector<User>& users,
                                              const IsolationDatabase& db,
                                              const LinkBudgetConfig& link, const RadioMap& map,
                                              double cell_center_radius_m);

struct TrialResult {
  Scheme scheme = Scheme::hd;
  std::vector<User> users;
  Assignment assignment;
  std::vector<LinkMetrics> links;
};

// One drop for trial `trial` of the campaign, scheduled by every configured scheme.
std::vector<TrialResult> run_trial(const ScenarioConfig& cfg, const RadioMap& map,
                                   const IsolationDatabase& db, int trial);

/// Sorted sample vector. Quantiles use the midpoint convention: sample i
/// (0-based) sits at probability (i + 0.5) / n, values in between are
/// interpolated linearly and queries outside [0.5/n, 1 - 0.5/n] clamp to the
/// extremes.
class CdfSeries {
 public:
  CdfSeries() = default;
  explicit CdfSeries(std::vector<double> samples);

  const std::vector<double>& samples() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

  double query(double q) const;
  double median() const { return query(0.5); }
  // Fraction of samples exactly equal to x.
  double mass_at(double x) const;
  // Fraction of samples <= x.
  double cdf(double x) const;
  // Fraction of samples > x.
  double exceedance(double x) const;

  CdfSeries merged(const CdfSeries& other) const;

 private:
  std::vector<double> sorted_;
};

CdfSeries compute_cdf(std::vector<double> samples);

enum class View { whole_cell, cell_center };
std::string to_string(View v);

struct SchemeReport {
  Scheme scheme = Scheme::hd;
  // Interference at DL victims of full-duplex resources.
  CdfSeries interference[2];
  // Normalized SE of DL links.
  CdfSeries dl_se[2];
  // Normalized SE of UL and DL links together.
  CdfSeries combined_se[2];
  // Raw rate density of DL links.
  CdfSeries dl_rate[2];
  double mean_occupied_bandwidth_hz = 0.0;
  double mean_full_duplex_pairs = 0.0;

  const CdfSeries& series(const std::string& metric, View v) const;
};

struct CampaignReport {
  double bs_tx_power_dbm = 0.0;
  double noise_dbm = 0.0;
  // P_UE - alpha for the weakest region pair; absent when the database is empty.
  std::optional<double> interference_floor_dbm;
  int trials = 0;
  std::vector<SchemeReport> schemes;

  const SchemeReport* find(Scheme s) const;
};

inline const std::vector<std::string> kMetricNames{"interference", "dl_se", "combined_se",
                                                   "dl_rate"};

// threads == 0 uses the hardware concurrency. The result does not depend on
// the thread count.
CampaignReport run_campaign(const ScenarioConfig& cfg, const RadioMap& map,
                            const IsolationDatabase& db, unsigned threads = 0);

struct GainSummary {
  std::optional<double> fdregrand_over_hd;     // combined SE medians
  std::optional<double> fdreghdelse_over_hd;   // combined SE medians
  std::optional<double> optimal_over_hd;       // combined SE medians
  std::optional<double> fdregrand_over_fdrand_dl;     // whole cell
  std::optional<double> fdregrand_over_fdrand_dl_cc;  // cell center
};

GainSummary gains(const CampaignReport& report);

// Writes cdf_<metric>_<scheme>_<view>_p<power>dBm.csv for every non-empty series.
void write_cdf_files(const CampaignReport& report, const std::filesystem::path& dir);

// summary.json and summary.txt covering all reports.
std::string format_summary_json(const std::vector<CampaignReport>& reports);
std::string format_summary_text(const std::vector<CampaignReport>& reports);

}  // namespace geofd
