#pragma once

#include "hetsync/perturb.hpp"
#include "hetsync/sim.hpp"
#include "hetsync/stability.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetsync {

/// Numeric table with a header row. Values round-trip exactly (17 significant
/// digits; nan and inf spelled as such).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws InvalidInput when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
/// Throws InvalidInput on ragged rows or unparseable cells.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// epsilon, sigma_min_direct, sigma_max_direct, sigma_min_pert, sigma_max_pert
CsvTable contour_table(const StabilityContour& contour);
/// sigma, epsilon, E, sync
CsvTable error_map_table(const ErrorMap& map);
/// zeta_k, U_ss_1, U_ss_2, ...
CsvTable curvature_table(const CurvatureProfile& profile);
/// s, psi
CsvTable mle_table(const MleCurve& curve);

/// Rebuilds an ErrorMap from its CSV; grids are recovered from the cells.
ErrorMap error_map_from_table(const CsvTable& table, double threshold);

}  // namespace hetsync
