#pragma once

#include "hetsync/network.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace hetsync {

/// Reads an adjacency matrix from JSON. Accepted forms (indices 0-based):
///   [[0, 1], [1, 0]]                                  dense matrix
///   {"adjacency": [[0, 1], [1, 0]]}                   dense matrix
///   {"n": 3, "edges": [[0, 1, 1.0], [1, 2]]}          edge list, weight defaults to 1
/// Throws InvalidInput on malformed content.
Eigen::MatrixXd adjacency_from_json(const nlohmann::json& doc);

Eigen::MatrixXd read_adjacency(const std::filesystem::path& path);

/// Edge-list form of a network's adjacency (upper triangle, nonzero weights).
nlohmann::json adjacency_to_json(const Eigen::MatrixXd& adjacency);

}  // namespace hetsync
