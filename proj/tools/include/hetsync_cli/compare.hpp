#pragma once

#include "hetsync/csv.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <vector>

namespace hetsync::cli {

/// Stable-sigma boundaries of one epsilon row, predicted and simulated.
struct RowComparison {
  double epsilon = 0.0;
  double direct_lower = 0.0;
  double direct_upper = 0.0;
  double sim_lower = 0.0;
  double sim_upper = 0.0;
  bool direct_empty = false;
  bool sim_empty = false;
};

/// Cell agreement between a direct stability contour and a simulated sync
/// mask. A cell counts only when every cell within `band` sigma steps in its
/// row has the same predicted class.
struct AgreementReport {
  std::size_t cells = 0;
  std::size_t considered = 0;
  std::size_t agreed = 0;
  int band = 2;
  std::vector<RowComparison> rows;

  double rate() const { return considered ? static_cast<double>(agreed) / considered : 0.0; }
  nlohmann::json to_json() const;
};

/// Throws InvalidInput when the epsilon grids differ.
AgreementReport compare_tables(const CsvTable& contour, const CsvTable& errormap, int band = 2);

/// Accepts the two CSVs in either order.
AgreementReport compare_files(const std::filesystem::path& a, const std::filesystem::path& b, int band = 2);

/// Errormap table whose sync column is the contour itself, E = 0 inside.
CsvTable rasterize_contour(const CsvTable& contour, const std::vector<double>& sigma_grid);

}  // namespace hetsync::cli
