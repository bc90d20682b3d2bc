#pragma once

#include "hetsync/errors.hpp"
#include "hetsync/sim.hpp"
#include "hetsync/stability.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hetsync::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kConfigError = 2, kNumericalAbort = 3 };

/// Malformed or inconsistent experiment configuration.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Fully resolved experiment: every referenced file is loaded, random inputs
/// are drawn, and grids are expanded, so `echo()` reproduces the run alone.
struct ExperimentConfig {
  std::string analysis;
  std::string model;
  nlohmann::json model_overrides = nlohmann::json::object();

  std::optional<Eigen::MatrixXd> adjacency;
  std::optional<Eigen::VectorXd> delta;
  /// Where delta came from: "inline" or "random(seed=...)".
  std::string delta_source;

  std::vector<double> sigma_grid;
  std::vector<double> epsilon_grid;
  std::vector<double> zeta_grid;
  std::vector<double> s_grid;
  std::vector<double> sigma_values;
  std::optional<double> zeta_i;
  bool perturbative = true;
  /// Basis for the perturbative contour; "as_given" exposes degenerate gaps.
  BasisPolicy basis = BasisPolicy::adapt_to_mismatch;

  long mle_iterations = 1'000'000;
  long mle_transient = 1000;
  OptoBase opto_base = OptoBase::beta;

  SimConfig sim;
  std::uint64_t seed = 1;
  std::filesystem::path output = "out";
  unsigned workers = 0;

  nlohmann::json echo() const;
};

std::vector<std::string> analysis_names();

/// Throws ConfigError. Relative file references resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".",
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

/// Expands [start, stop] with a fixed step (stop included within 1e-9 steps).
std::vector<double> make_grid(double start, double stop, double step);

/// Standard-normal draw, centered and normalized.
Eigen::VectorXd random_mismatch(int n, std::uint64_t seed);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string digest(const std::string& text);

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

/// Executes a config file and writes the artifacts; returns an ExitCode.
/// Config errors leave no files behind; numerical aborts leave run.log with
/// the reason.
int run(const std::filesystem::path& config_path, const RunOptions& options = {});

/// Same, for an already parsed document.
int run_document(const nlohmann::json& doc, const std::filesystem::path& base_dir, const RunOptions& options);

}  // namespace hetsync::cli
