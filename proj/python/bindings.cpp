#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "geofd/config.hpp"
#include "geofd/error.hpp"
#include "geofd/hungarian.hpp"
#include "geofd/propagation.hpp"
#include "geofd/radio_map.hpp"
#include "geofd/region_db.hpp"
#include "geofd/sim.hpp"

namespace py = pybind11;
using namespace geofd;

namespace {

py::tuple match(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.front().size();
  CostMatrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw ValidationError("cost matrix rows differ in length");
    for (std::size_t c = 0; c < m; ++c) cost(r, c) = rows[r][c];
  }
  const Matching res = solve_matching(cost);
  return py::make_tuple(res.row_to_col, res.total_cost);
}

std::string map_text(const std::string& config_json) {
  const RunConfig cfg = parse_run_config(config_json);
  return format_radio_map(generate_synthetic_map(cfg.map, cfg.seed));
}

std::string database_json(const std::string& config_json, const std::string& map) {
  const RunConfig cfg = parse_run_config(config_json);
  const RadioMap rm = parse_radio_map(map);
  return format_database(
      build_database(rm, cfg.extraction, make_oracle(cfg, rm), oracle_label(cfg.oracle)));
}

std::string simulate(const std::string& config_json, const std::string& map,
                     const std::string& db_json, std::optional<int> trials, unsigned threads) {
  RunConfig cfg = parse_run_config(config_json);
  if (trials) cfg.simulation.trials = *trials;
  validate(cfg);
  const RadioMap rm = parse_radio_map(map);
  const IsolationDatabase db = parse_database(db_json);
  std::vector<CampaignReport> reports;
  {
    py::gil_scoped_release release;
    for (double p : cfg.simulation.bs_tx_powers_dbm) {
      reports.push_back(run_campaign(scenario_for(cfg, p), rm, db, threads));
    }
  }
  return format_summary_json(reports);
}

}  // namespace

PYBIND11_MODULE(_geofd, m) {
  m.doc() = "Geolocation-aided full-duplex scheduling simulator";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("ue_ue_pathloss", &ue_ue_pathloss, py::arg("d_km"), py::arg("f_mhz"),
        "UE-to-UE path loss in dB.");
  m.def("solve_matching", &match, py::arg("cost"),
        "Minimum-cost matching. Returns (row_to_col, total_cost).");
  m.def("default_config", [] { return format_run_config(RunConfig{}); },
        "Fully resolved default configuration as JSON text.");
  m.def("resolve_config", [](const std::string& text) {
    return format_run_config(parse_run_config(text));
  }, py::arg("config_json"));
  m.def("generate_map", &map_text, py::arg("config_json"),
        "Synthetic radio map in the text map format.");
  m.def("build_database", &database_json, py::arg("config_json"), py::arg("map_text"),
        "Region-pair database as JSON text.");
  m.def("simulate", &simulate, py::arg("config_json"), py::arg("map_text"), py::arg("db_json"),
        py::arg("trials") = std::nullopt, py::arg("threads") = 0u,
        "Runs every configured campaign and returns the summary JSON text.");
}
