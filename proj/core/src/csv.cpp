#include "hetsync/csv.hpp"

#include "hetsync/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hetsync {
namespace {

std::string format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse(const std::string& cell, std::size_t line) {
  std::string s = cell;
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "nan" || lower.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (lower == "inf" || lower == "+inf") return std::numeric_limits<double>::infinity();
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InvalidInput("csv line " + std::to_string(line) + ": cannot parse '" + cell + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InvalidInput("csv has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format(row[i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(out, table);
  if (!out) throw Error("failed writing " + path.string());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      for (auto& h : split(line)) {
        h.erase(0, h.find_first_not_of(" \t"));
        h.erase(h.find_last_not_of(" \t") + 1);
        table.header.push_back(h);
      }
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw InvalidInput("csv line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                         " cells, expected " + std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse(c, lineno));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw InvalidInput("csv is empty");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_csv(in);
}

CsvTable contour_table(const StabilityContour& contour) {
  CsvTable t{{"epsilon", "sigma_min_direct", "sigma_max_direct", "sigma_min_pert", "sigma_max_pert"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t e = 0; e < contour.epsilon.size(); ++e) {
    const auto& d = contour.direct[e];
    double pmin = nan;
    double pmax = nan;
    if (!contour.perturbative.empty()) {
      pmin = contour.perturbative[e].lower;
      pmax = contour.perturbative[e].upper;
    }
    t.rows.push_back({contour.epsilon[e], d.lower, d.upper, pmin, pmax});
  }
  return t;
}

CsvTable error_map_table(const ErrorMap& map) {
  CsvTable t{{"sigma", "epsilon", "E", "sync"}, {}};
  for (std::size_t e = 0; e < map.epsilon.size(); ++e) {
    for (std::size_t s = 0; s < map.sigma.size(); ++s) {
      const std::size_t c = map.index(e, s);
      t.rows.push_back({map.sigma[s], map.epsilon[e], map.error[c], map.sync[c] ? 1.0 : 0.0});
    }
  }
  return t;
}

CsvTable curvature_table(const CurvatureProfile& profile) {
  CsvTable t;
  t.header.push_back("zeta_k");
  for (std::size_t j = 0; j < profile.critical_indices.size(); ++j) t.header.push_back("U_ss_" + std::to_string(j + 1));
  for (std::size_t g = 0; g < profile.zeta_k.size(); ++g) {
    std::vector<double> row{profile.zeta_k[g]};
    for (const auto& v : profile.values) row.push_back(v[g]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable mle_table(const MleCurve& curve) {
  CsvTable t{{"s", "psi"}, {}};
  for (std::size_t i = 0; i < curve.s.size(); ++i) t.rows.push_back({curve.s[i], curve.psi[i]});
  return t;
}

ErrorMap error_map_from_table(const CsvTable& table, double threshold) {
  const auto sig = table.values("sigma");
  const auto eps = table.values("epsilon");
  const auto err = table.values("E");
  std::vector<double> sg = sig;
  std::vector<double> eg = eps;
  std::sort(sg.begin(), sg.end());
  sg.erase(std::unique(sg.begin(), sg.end()), sg.end());
  std::sort(eg.begin(), eg.end());
  eg.erase(std::unique(eg.begin(), eg.end()), eg.end());
  if (sg.size() * eg.size() != table.rows.size()) throw InvalidInput("error map csv is not a full grid");

  ErrorMap map;
  map.sigma = sg;
  map.epsilon = eg;
  map.threshold = threshold;
  map.error.assign(table.rows.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(table.rows.size(), false);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto s = static_cast<std::size_t>(std::lower_bound(sg.begin(), sg.end(), sig[r]) - sg.begin());
    const auto e = static_cast<std::size_t>(std::lower_bound(eg.begin(), eg.end(), eps[r]) - eg.begin());
    const std::size_t c = map.index(e, s);
    if (seen[c]) throw InvalidInput("error map csv repeats a cell");
    seen[c] = true;
    map.error[c] = err[r];
  }
  map.sync.resize(map.error.size());
  for (std::size_t c = 0; c < map.error.size(); ++c) map.sync[c] = map.error[c] < threshold;
  return map;
}

}  // namespace hetsync
