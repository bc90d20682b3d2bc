#include "hetsync_cli/compare.hpp"
#include "hetsync_cli/experiment.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  namespace cli = hetsync::cli;
  if (const char* env = std::getenv("HETSYNC_LOG")) spdlog::set_level(spdlog::level::from_str(env));

  CLI::App app{"hetsync: synchronization of networks of mismatched oscillators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads for error maps (0 = all cores)");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the analysis described by a JSON config");
  run_cmd->add_option("config", config_path, "Experiment config")->required();

  std::string csv_a;
  std::string csv_b;
  int band = 2;
  auto* cmp_cmd = app.add_subcommand("compare", "Agreement between a contour CSV and an error map CSV");
  cmp_cmd->add_option("a", csv_a, "contour.csv or errormap.csv")->required();
  cmp_cmd->add_option("b", csv_b, "the other one")->required();
  cmp_cmd->add_option("--band", band, "Boundary cells excluded on each side")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  if (*run_cmd) {
    cli::RunOptions opts;
    if (*out_opt) opts.out = out_dir;
    if (*seed_opt) opts.seed = seed;
    if (*workers_opt) opts.workers = workers;
    try {
      return cli::run(config_path, opts);
    } catch (const std::exception& e) {
      spdlog::critical("{}", e.what());
      return cli::kUnexpected;
    }
  }

  try {
    const auto report = cli::compare_files(csv_a, csv_b, band).to_json();
    if (*out_opt) {
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / "compare.json") << report.dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return cli::kOk;
  } catch (const hetsync::InvalidInput& e) {
    spdlog::error("{}", e.what());
    return cli::kConfigError;
  }
}
