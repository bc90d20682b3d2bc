#include "hetsync/network_io.hpp"

#include "hetsync/errors.hpp"

#include <fstream>
#include <sstream>

namespace hetsync {
namespace {

Eigen::MatrixXd dense_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidInput("adjacency must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidInput("adjacency must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw InvalidInput("adjacency entries must be numbers");
      a(i, j) = v.get<double>();
    }
  }
  return a;
}

Eigen::MatrixXd edges_from_json(const nlohmann::json& doc) {
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw InvalidInput("edge-list network needs an integer \"n\"");
  }
  const auto n = doc["n"].get<long long>();
  if (n < 2) throw InvalidInput("network needs at least two nodes");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) {
      throw InvalidInput("each edge must be [i, j] or [i, j, w]");
    }
    if (!e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InvalidInput("edge endpoints must be integers");
    }
    const auto i = e[0].get<long long>();
    const auto j = e[1].get<long long>();
    if (i < 0 || j < 0 || i >= n || j >= n) {
      std::ostringstream os;
      os << "edge [" << i << ", " << j << "] out of range for n = " << n;
      throw InvalidInput(os.str());
    }
    if (i == j) throw InvalidInput("self-loops are not allowed");
    const double w = e.size() == 3 ? e[2].get<double>() : 1.0;
    a(i, j) += w;
    a(j, i) += w;
  }
  return a;
}

}  // namespace

Eigen::MatrixXd adjacency_from_json(const nlohmann::json& doc) {
  try {
    if (doc.is_array()) return dense_from_json(doc);
    if (doc.is_object() && doc.contains("adjacency")) return dense_from_json(doc["adjacency"]);
    if (doc.is_object() && doc.contains("edges")) return edges_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed network: ") + e.what());
  }
  throw InvalidInput("network must be a dense matrix, {\"adjacency\": ...} or {\"n\": N, \"edges\": ...}");
}

Eigen::MatrixXd read_adjacency(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open network file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse network file " + path.string() + ": " + e.what());
  }
  return adjacency_from_json(doc);
}

nlohmann::json adjacency_to_json(const Eigen::MatrixXd& adjacency) {
  nlohmann::json edges = nlohmann::json::array();
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency(i, j) != 0.0) edges.push_back({i, j, adjacency(i, j)});
    }
  }
  return {{"n", adjacency.rows()}, {"edges", edges}};
}

}  // namespace hetsync
