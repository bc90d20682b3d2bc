#pragma once

#include "hetsync/models.hpp"
#include "hetsync/network.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace hetsync {

/// Integration and averaging settings for nonlinear network simulations.
struct SimConfig {
  /// Fixed RK4 step for continuous-time models.
  double dt = 1e-3;
  double t_transient = 500.0;
  double t_average = 500.0;
  long map_transient = 10'000;
  long map_average = 10'000;
  /// Uncoupled pre-run that places the common initial point on the attractor.
  double prerun_time = 100.0;
  long prerun_iterations = 1000;
  /// Half-width of the uniform per-node initial perturbation.
  double perturbation = 1e-3;
  std::uint64_t seed = 1;
  /// Cells with E below this are classified synchronized.
  double sync_threshold = 1e-2;
  /// Any |state| above this marks the run as divergent.
  double divergence_guard = 1e6;

  /// Throws InvalidInput on non-positive step, windows or threshold.
  void validate() const;
};

struct SimResult {
  /// Time-averaged synchronization error of the first state component;
  /// +inf when the trajectory diverged.
  double error = 0.0;
  /// Time-averaged ||mean state - node 0 state||.
  double mean_node_deviation = 0.0;
  bool diverged = false;
};

/// Point on the uncoupled nominal attractor, reached from the model's seed state.
Eigen::VectorXd attractor_point(const ModelSpec& model, const SimConfig& cfg);

/// Simulates the full heterogeneous network at (sigma, eps).
///
/// Local-parameter mode shifts the mismatched parameter of node i by
/// eps * delta_i; frequency mode scales the whole right-hand side (or the
/// bracketed map update, before the modulus) by (1 + eps delta_i). Initial
/// states are the attractor point plus uniform noise drawn from an RNG seeded
/// by (cfg.seed, cell_index).
SimResult simulate(const Network& net, const MismatchVector& mism, const ModelSpec& model, double sigma, double eps,
                   const SimConfig& cfg, std::uint64_t cell_index = 0);

/// Synchronization error over a (sigma, eps) grid; cells are stored
/// eps-major: cell(e, s) = values[e * sigma.size() + s].
struct ErrorMap {
  std::vector<double> sigma;
  std::vector<double> epsilon;
  std::vector<double> error;
  std::vector<bool> sync;
  double threshold = 0.0;

  std::size_t index(std::size_t e, std::size_t s) const { return e * sigma.size() + s; }
};

/// Runs every cell; `workers` threads (0 = hardware concurrency). The result
/// does not depend on the worker count.
ErrorMap error_map(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                   std::span<const double> sigma_grid, std::span<const double> epsilon_grid, const SimConfig& cfg,
                   unsigned workers = 1);

}  // namespace hetsync
