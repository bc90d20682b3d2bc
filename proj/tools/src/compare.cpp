#include "hetsync_cli/compare.hpp"

#include "hetsync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetsync::cli {
namespace {

constexpr double kGridTol = 1e-9;

bool inside(double sigma, double lower, double upper) { return sigma >= lower && sigma <= upper; }

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::json AgreementReport::to_json() const {
  nlohmann::json j;
  j["cells"] = cells;
  j["considered"] = considered;
  j["agreed"] = agreed;
  j["agreement"] = rate();
  j["boundary_band_cells"] = band;
  auto& rj = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    rj.push_back({{"epsilon", r.epsilon},
                  {"direct_lower", number(r.direct_lower)},
                  {"direct_upper", number(r.direct_upper)},
                  {"sim_lower", number(r.sim_lower)},
                  {"sim_upper", number(r.sim_upper)},
                  {"direct_empty", r.direct_empty},
                  {"sim_empty", r.sim_empty},
                  {"lower_discrepancy", number(r.sim_lower - r.direct_lower)}});
  }
  return j;
}

AgreementReport compare_tables(const CsvTable& contour, const CsvTable& errormap, int band) {
  if (band < 0) throw InvalidInput("boundary band must be nonnegative");
  const auto c_eps = contour.values("epsilon");
  const auto c_lo = contour.values("sigma_min_direct");
  const auto c_hi = contour.values("sigma_max_direct");
  const ErrorMap map = error_map_from_table(errormap, 0.5);
  // sync column is authoritative; E is only used to recover the grid.
  const auto m_sig = errormap.values("sigma");
  const auto m_eps = errormap.values("epsilon");
  const auto m_sync = errormap.values("sync");
  std::vector<bool> sync(map.error.size(), false);
  for (std::size_t r = 0; r < errormap.rows.size(); ++r) {
    const auto s = static_cast<std::size_t>(std::lower_bound(map.sigma.begin(), map.sigma.end(), m_sig[r]) - map.sigma.begin());
    const auto e = static_cast<std::size_t>(std::lower_bound(map.epsilon.begin(), map.epsilon.end(), m_eps[r]) - map.epsilon.begin());
    sync[map.index(e, s)] = m_sync[r] > 0.5;
  }

  if (c_eps.size() != map.epsilon.size()) throw InvalidInput("contour and error map have different epsilon grids");
  std::vector<std::size_t> row_of(map.epsilon.size());
  for (std::size_t e = 0; e < map.epsilon.size(); ++e) {
    const auto it = std::find_if(c_eps.begin(), c_eps.end(),
                                 [&](double v) { return std::abs(v - map.epsilon[e]) <= kGridTol; });
    if (it == c_eps.end()) throw InvalidInput("contour and error map have different epsilon grids");
    row_of[e] = static_cast<std::size_t>(it - c_eps.begin());
  }

  AgreementReport rep;
  rep.band = band;
  const std::size_t ns = map.sigma.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t e = 0; e < map.epsilon.size(); ++e) {
    const std::size_t cr = row_of[e];
    std::vector<bool> predicted(ns);
    for (std::size_t s = 0; s < ns; ++s) predicted[s] = inside(map.sigma[s], c_lo[cr], c_hi[cr]);
    for (std::size_t s = 0; s < ns; ++s) {
      ++rep.cells;
      const std::size_t a = s >= static_cast<std::size_t>(band) ? s - band : 0;
      const std::size_t b = std::min(ns - 1, s + band);
      bool clear = true;
      for (std::size_t t = a; t <= b; ++t) clear = clear && predicted[t] == predicted[s];
      if (!clear) continue;
      ++rep.considered;
      if (predicted[s] == sync[map.index(e, s)]) ++rep.agreed;
    }

    RowComparison row;
    row.epsilon = map.epsilon[e];
    row.direct_empty = std::isnan(c_lo[cr]);
    row.direct_lower = c_lo[cr];
    row.direct_upper = c_hi[cr];
    row.sim_lower = nan;
    row.sim_upper = nan;
    std::size_t s = 0;
    while (s < ns && !sync[map.index(e, s)]) ++s;
    row.sim_empty = s == ns;
    if (!row.sim_empty) {
      row.sim_lower = map.sigma[s];
      while (s + 1 < ns && sync[map.index(e, s + 1)]) ++s;
      row.sim_upper = s + 1 == ns ? std::numeric_limits<double>::infinity() : map.sigma[s];
    }
    rep.rows.push_back(row);
  }
  return rep;
}

AgreementReport compare_files(const std::filesystem::path& a, const std::filesystem::path& b, int band) {
  const CsvTable ta = read_csv(a);
  const CsvTable tb = read_csv(b);
  auto is_contour = [](const CsvTable& t) {
    return std::find(t.header.begin(), t.header.end(), "sigma_min_direct") != t.header.end();
  };
  if (is_contour(ta) && !is_contour(tb)) return compare_tables(ta, tb, band);
  if (is_contour(tb) && !is_contour(ta)) return compare_tables(tb, ta, band);
  throw InvalidInput("compare needs one contour csv and one error map csv");
}

CsvTable rasterize_contour(const CsvTable& contour, const std::vector<double>& sigma_grid) {
  const auto eps = contour.values("epsilon");
  const auto lo = contour.values("sigma_min_direct");
  const auto hi = contour.values("sigma_max_direct");
  CsvTable t{{"sigma", "epsilon", "E", "sync"}, {}};
  for (std::size_t e = 0; e < eps.size(); ++e) {
    for (double s : sigma_grid) {
      const bool in = inside(s, lo[e], hi[e]);
      t.rows.push_back({s, eps[e], in ? 0.0 : 1.0, in ? 1.0 : 0.0});
    }
  }
  return t;
}

}  // namespace hetsync::cli
