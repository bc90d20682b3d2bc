#pragma once

#include "hetsync/models.hpp"
#include "hetsync/network.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hetsync::testing {

inline Eigen::MatrixXd complete_graph(int n, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, w);
  a.diagonal().setZero();
  return a;
}

inline Eigen::MatrixXd from_edges(int n, const std::vector<std::pair<int, int>>& edges, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : edges) a(i, j) = a(j, i) = w;
  return a;
}

/// Connected random graph: a random spanning tree plus extra edges with
/// probability p, weights uniform in [wmin, wmax].
inline Eigen::MatrixXd random_graph(int n, std::mt19937_64& rng, double p = 0.5, double wmin = 0.5,
                                    double wmax = 1.5) {
  std::uniform_real_distribution<double> w(wmin, wmax);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    a(i, j) = a(j, i) = w(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a(i, j) == 0.0 && u(rng) < p) a(i, j) = a(j, i) = w(rng);
    }
  }
  return a;
}

inline Eigen::VectorXd random_delta(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = g(rng);
  d.array() -= d.mean();
  return d / d.norm();
}

/// Three all-to-all Chua nodes with the mismatch of the reference experiment.
inline Eigen::VectorXd fig2_delta() { return Eigen::Vector3d(-0.6534, 0.7507, -0.0973); }

inline Eigen::MatrixXd fig4_adjacency() {
  return from_edges(9, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 7}, {0, 8}, {1, 2}, {1, 4}, {1, 6},
                        {1, 7}, {1, 8}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {2, 7}, {2, 8}, {3, 4}, {3, 5},
                        {3, 7}, {3, 8}, {4, 5}, {4, 6}, {4, 8}, {5, 6}, {5, 7}, {6, 8}, {7, 8}});
}

inline Eigen::VectorXd fig4_delta() {
  Eigen::VectorXd d(9);
  d << 0.1568, -0.0869, -0.6469, -0.4689, 0.0152, 0.1642, 0.3971, 0.1033, 0.3661;
  return d;
}

/// Five nodes, all pairs but (0, 1) linked, weight 1.001.
inline Eigen::MatrixXd fig6_adjacency() {
  Eigen::MatrixXd a = complete_graph(5, 1.001);
  a(0, 1) = a(1, 0) = 0.0;
  return a;
}

inline Eigen::VectorXd fig6_delta() {
  Eigen::VectorXd d(5);
  d << -0.5323, -0.5265, 0.1526, 0.5058, 0.4003;
  return d;
}

inline std::vector<double> linspace_step(double start, double step, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = start + step * i;
  return g;
}

}  // namespace hetsync::testing
