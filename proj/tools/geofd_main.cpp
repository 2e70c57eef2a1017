#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geofd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Geographical-context interference coordination for full-duplex cells"};
  app.require_subcommand(1);

  geofd::cli::CommonOptions common;
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Seed, overrides the config");
    sub->add_option("--out", out, "Existing output directory");
  };

  auto* gen = app.add_subcommand("gen-map", "Write a synthetic radio map");
  add_common(gen);

  std::string map_path;
  auto* build = app.add_subcommand("build-db", "Extract region pairs from a radio map");
  add_common(build);
  build->add_option("--map", map_path, "Radio map file")->required();

  geofd::cli::SimulateOptions sim;
  std::string db_path;
  int trials = 0;
  auto* simulate = app.add_subcommand("simulate", "Run the Monte-Carlo campaign");
  add_common(simulate);
  simulate->add_option("--map", map_path, "Radio map file")->required();
  simulate->add_option("--db", db_path, "Isolation database file")->required();
  simulate->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--trials", trials, "Trials, overrides the config")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--scheme", sim.schemes, "Schemes to run, overrides the config");

  geofd::cli::ScheduleOptions sched;
  auto* schedule = app.add_subcommand("schedule", "Schedule one user drop and export it");
  add_common(schedule);
  schedule->add_option("--map", map_path, "Radio map file")->required();
  schedule->add_option("--db", db_path, "Isolation database file")->required();
  schedule->add_option("--scheme", sched.scheme, "HD, FDrand, FDregrand, FDregHDelse or Optimal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto* used = app.get_subcommands().front();
  if (!config.empty()) common.config = config;
  if (used->count("--seed") > 0) common.seed = seed;
  common.out = out;

  try {
    if (used == gen) {
      geofd::cli::gen_map(common, std::cout);
    } else if (used == build) {
      geofd::cli::build_db(common, map_path, std::cout, std::cerr);
    } else if (used == simulate) {
      sim.map = map_path;
      sim.db = db_path;
      if (trials > 0) sim.trials = trials;
      geofd::cli::simulate(common, sim, std::cout);
    } else {
      sched.map = map_path;
      sched.db = db_path;
      geofd::cli::schedule(common, sched, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "geofd " << used->get_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
