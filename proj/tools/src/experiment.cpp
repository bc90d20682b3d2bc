#include "hetsync_cli/experiment.hpp"

#include "hetsync/csv.hpp"
#include "hetsync/models.hpp"
#include "hetsync/network.hpp"
#include "hetsync/network_io.hpp"
#include "hetsync_cli/compare.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace hetsync::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys = {
    "analysis", "model",      "network", "delta", "sigma_grid", "epsilon_grid", "zeta_grid", "zeta_i",
    "s_grid",   "sigma_values", "perturbative", "basis", "mle", "opto_base", "sim", "seed", "output", "workers"};

const std::set<std::string> kSimKeys = {"dt",           "t_transient",   "t_average",  "map_transient",
                                        "map_average",  "prerun_time",   "prerun_iterations",
                                        "perturbation", "sync_threshold", "divergence_guard"};

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " is missing or has the wrong type");
  }
}

std::vector<double> parse_grid(const json& j, const std::string& name) {
  if (j.is_array()) {
    std::vector<double> g;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(name + " entries must be numbers");
      g.push_back(v.get<double>());
    }
    if (g.empty()) throw ConfigError(name + " is empty");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) throw ConfigError(name + " must be strictly increasing");
    }
    return g;
  }
  if (j.is_object()) {
    const double start = get<double>(j, "start", name);
    const double stop = get<double>(j, "stop", name);
    const double step = get<double>(j, "step", name);
    if (!(step > 0.0) || !(stop >= start)) throw ConfigError(name + " needs start <= stop and step > 0");
    return make_grid(start, stop, step);
  }
  throw ConfigError(name + " must be an array or {start, stop, step}");
}

Eigen::MatrixXd parse_network(const json& j, const std::filesystem::path& base_dir) {
  try {
    if (j.is_object() && j.contains("file")) {
      const std::filesystem::path p = base_dir / j.at("file").get<std::string>();
      if (!std::filesystem::exists(p)) throw ConfigError("network file " + p.string() + " does not exist");
      return read_adjacency(p);
    }
    return adjacency_from_json(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
}

SimConfig parse_sim(const json& j) {
  SimConfig c;
  if (!j.is_object()) throw ConfigError("sim must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!kSimKeys.count(key)) throw ConfigError("unknown sim field '" + key + "'");
    if (!value.is_number()) throw ConfigError("sim." + key + " must be a number");
  }
  c.dt = j.value("dt", c.dt);
  c.t_transient = j.value("t_transient", c.t_transient);
  c.t_average = j.value("t_average", c.t_average);
  c.map_transient = j.value("map_transient", c.map_transient);
  c.map_average = j.value("map_average", c.map_average);
  c.prerun_time = j.value("prerun_time", c.prerun_time);
  c.prerun_iterations = j.value("prerun_iterations", c.prerun_iterations);
  c.perturbation = j.value("perturbation", c.perturbation);
  c.sync_threshold = j.value("sync_threshold", c.sync_threshold);
  c.divergence_guard = j.value("divergence_guard", c.divergence_guard);
  try {
    c.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return c;
}

json sim_to_json(const SimConfig& c) {
  return {{"dt", c.dt},
          {"t_transient", c.t_transient},
          {"t_average", c.t_average},
          {"map_transient", c.map_transient},
          {"map_average", c.map_average},
          {"prerun_time", c.prerun_time},
          {"prerun_iterations", c.prerun_iterations},
          {"perturbation", c.perturbation},
          {"sync_threshold", c.sync_threshold},
          {"divergence_guard", c.divergence_guard}};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

void require(bool ok, const std::string& analysis, const std::string& field) {
  if (!ok) throw ConfigError("analysis '" + analysis + "' requires " + field);
}

OptoModel opto_from(const json& overrides) {
  return optoelectronic(overrides.value("beta", 2.0 * 3.14159265358979323846), overrides.value("alpha", 0.525));
}

std::shared_ptr<spdlog::logger> make_logger(std::ostringstream& buffer) {
  auto console = std::make_shared<spdlog::sinks::stderr_color_sink_mt>();
  auto level = spdlog::level::info;
  if (const char* env = std::getenv("HETSYNC_LOG")) level = spdlog::level::from_str(env);
  console->set_level(level);
  auto file = std::make_shared<spdlog::sinks::ostream_sink_mt>(buffer, true);
  file->set_level(spdlog::level::debug);
  file->set_pattern("[%l] %v");
  auto logger = std::make_shared<spdlog::logger>("hetsync", spdlog::sinks_init_list{console, file});
  logger->set_level(spdlog::level::debug);
  return logger;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Outputs of one analysis, written only after every computation succeeded.
struct Artifacts {
  std::map<std::string, CsvTable> tables;
  json summary = json::object();
};

struct Inputs {
  ModelSpec model;
  std::optional<Network> network;
  std::optional<MismatchVector> mismatch;
};

Inputs prepare(const ExperimentConfig& cfg, spdlog::logger& log) {
  Inputs in;
  try {
    in.model = make_model(cfg.model, cfg.model_overrides);
    if (cfg.adjacency) {
      in.network = build_network(*cfg.adjacency);
      if (cfg.delta) {
        if (cfg.delta->size() != in.network->size()) throw ConfigError("delta length does not match the network");
        in.mismatch = project_mismatch(*in.network, *cfg.delta);
        for (const auto& w : in.mismatch->warnings) log.warn("{}", w);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return in;
}

Artifacts run_curvature(const ExperimentConfig& cfg, const Inputs& in, spdlog::logger& log) {
  const double zeta_i = cfg.zeta_i.value_or(in.model.reference_zeta);
  const CurvatureProfile p = curvature_contribution(in.model, zeta_i, cfg.zeta_grid);
  std::size_t nonnegative = 0;
  double max_value = -std::numeric_limits<double>::infinity();
  for (const auto& col : p.values) {
    for (std::size_t g = 0; g < col.size(); ++g) {
      max_value = std::max(max_value, col[g]);
      if (col[g] >= 0.0) {
        ++nonnegative;
        log.warn("[U_ik]_ss = {:.6g} is not negative at zeta_k = {:.6g}", col[g], p.zeta_k[g]);
      }
    }
  }
  Artifacts a;
  a.tables["curvature.csv"] = curvature_table(p);
  a.summary = {{"zeta_i", zeta_i},
               {"critical_indices", p.critical_indices},
               {"max_value", max_value},
               {"nonnegative_entries", nonnegative}};
  return a;
}

Artifacts run_contour(const ExperimentConfig& cfg, const Inputs& in, spdlog::logger& log) {
  const StabilityContour c =
      stability_contour(*in.network, *in.mismatch, in.model, cfg.sigma_grid, cfg.epsilon_grid,
                                                 cfg.perturbative, kSigmaTol, cfg.basis);
  std::size_t empty = 0;
  for (std::size_t e = 0; e < c.direct.size(); ++e) {
    if (c.direct[e].empty) {
      ++empty;
      log.info("no stable sigma on the grid at epsilon = {:.6g}", c.epsilon[e]);
    }
  }
  Artifacts a;
  a.tables["contour.csv"] = contour_table(c);
  a.summary = {{"criterion", std::string(to_string(c.criterion))},
               {"empty_rows", empty},
               {"gamma", std::vector<double>(in.network->gamma.data(),
                                             in.network->gamma.data() + in.network->gamma.size())}};
  return a;
}

Artifacts run_errormap(const ExperimentConfig& cfg, const Inputs& in, spdlog::logger& log) {
  Artifacts a = run_contour(cfg, in, log);
  const ErrorMap map =
      error_map(*in.network, *in.mismatch, in.model, cfg.sigma_grid, cfg.epsilon_grid, cfg.sim, cfg.workers);
  std::size_t synced = 0;
  std::size_t diverged = 0;
  for (std::size_t c = 0; c < map.error.size(); ++c) {
    synced += map.sync[c] ? 1 : 0;
    diverged += std::isinf(map.error[c]) ? 1 : 0;
  }
  a.tables["errormap.csv"] = error_map_table(map);
  const AgreementReport rep = compare_tables(a.tables["contour.csv"], a.tables["errormap.csv"]);
  a.summary["sync_threshold"] = map.threshold;
  a.summary["sync_cells"] = synced;
  a.summary["diverged_cells"] = diverged;
  a.summary["agreement_off_boundary"] = rep.rate();
  log.info("error map: {} of {} cells synchronized, {} diverged, off-boundary agreement {:.4f}", synced,
           map.error.size(), diverged, rep.rate());
  return a;
}

Artifacts run_mle(const ExperimentConfig& cfg, const Inputs&, spdlog::logger& log) {
  const OptoModel opto = opto_from(cfg.model_overrides);
  const MleCurve curve = mle_curve(opto, cfg.s_grid, cfg.mle_iterations, cfg.mle_transient, cfg.seed);
  if (curve.skipped) log.info("{} iterates with vanishing derivative skipped", curve.skipped);
  Artifacts a;
  a.tables["mle.csv"] = mle_table(curve);
  a.summary = {{"mean_log_derivative", curve.mean_log_derivative},
               {"s_minus", curve.s_minus ? json(*curve.s_minus) : json(nullptr)},
               {"s_plus", curve.s_plus ? json(*curve.s_plus) : json(nullptr)},
               {"iterations", curve.iterations},
               {"transient", curve.transient},
               {"skipped", curve.skipped}};
  if (!curve.s_minus || !curve.s_plus) log.warn("MLE curve has no negative region bracketed by the s grid");
  return a;
}

Artifacts run_opto(const ExperimentConfig& cfg, const Inputs& in, spdlog::logger& log) {
  const OptoModel opto = opto_from(cfg.model_overrides);
  CsvTable t{{"sigma", "epsilon", "lambda_min", "lambda_max", "lambda_min_pert", "lambda_max_pert", "complex"}, {}};
  std::size_t complex_rows = 0;
  for (double sigma : cfg.sigma_values) {
    const OptoExpansion ex = opto_lambda2(*in.network, *in.mismatch, opto, sigma, cfg.opto_base);
    for (double eps : cfg.epsilon_grid) {
      const OptoExtremes d = opto_extremes(opto_assemble(*in.network, *in.mismatch, opto, sigma, eps, cfg.opto_base));
      const Eigen::VectorXd p = ex.predict(eps);
      if (d.complex_seen) {
        ++complex_rows;
        log.info("complex eigenvalues at sigma = {:.6g}, epsilon = {:.6g}; band test uses the modulus", sigma, eps);
      }
      t.rows.push_back({sigma, eps, d.lambda_min, d.lambda_max, p.minCoeff(), p.maxCoeff(), d.complex_seen ? 1.0 : 0.0});
    }
  }
  Artifacts a;
  a.tables["opto.csv"] = std::move(t);
  a.summary = {{"beta", opto.beta},
               {"alpha", opto.alpha},
               {"base", cfg.opto_base == OptoBase::beta ? "beta" : "unit"},
               {"band", {in.model.criterion.lower, in.model.criterion.upper}},
               {"complex_rows", complex_rows}};
  return a;
}

}  // namespace

std::vector<std::string> analysis_names() { return {"curvature", "contour", "errormap", "mle", "opto"}; }

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw InvalidInput("grid step must be positive");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count < 1) throw InvalidInput("grid is empty");
  // Decimal inputs are generated on an integer lattice so that e.g. 0.05 is
  // the double nearest 0.05 rather than an accumulated sum.
  double scale = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const double p = std::pow(10.0, k);
    if (std::abs(start * p - std::round(start * p)) < 1e-6 && std::abs(step * p - std::round(step * p)) < 1e-6) {
      scale = p;
      break;
    }
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const auto ii = static_cast<double>(i);
    g[static_cast<std::size_t>(i)] =
        scale > 0.0 ? (std::round(start * scale) + ii * std::round(step * scale)) / scale : start + ii * step;
  }
  return g;
}

Eigen::VectorXd random_mismatch(int n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("random mismatch needs at least two nodes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = normal(rng);
  d.array() -= d.mean();
  return d / d.norm();
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

json ExperimentConfig::echo() const {
  json j;
  j["analysis"] = analysis;
  json m = model_overrides;
  m["name"] = model;
  j["model"] = m;
  if (adjacency) j["network"] = {{"adjacency", matrix_to_json(*adjacency)}};
  if (delta) j["delta"] = std::vector<double>(delta->data(), delta->data() + delta->size());
  if (!sigma_grid.empty()) j["sigma_grid"] = sigma_grid;
  if (!epsilon_grid.empty()) j["epsilon_grid"] = epsilon_grid;
  if (!zeta_grid.empty()) j["zeta_grid"] = zeta_grid;
  if (!s_grid.empty()) j["s_grid"] = s_grid;
  if (!sigma_values.empty()) j["sigma_values"] = sigma_values;
  if (zeta_i) j["zeta_i"] = *zeta_i;
  j["perturbative"] = perturbative;
  j["basis"] = basis == BasisPolicy::as_given ? "as_given" : "adapted";
  j["mle"] = {{"iterations", mle_iterations}, {"transient", mle_transient}};
  j["opto_base"] = opto_base == OptoBase::beta ? "beta" : "unit";
  j["sim"] = sim_to_json(sim);
  j["seed"] = seed;
  j["output"] = output.string();
  return j;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kTopLevelKeys.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  c.analysis = get<std::string>(doc, "analysis", "config");
  const auto names = analysis_names();
  if (std::find(names.begin(), names.end(), c.analysis) == names.end()) {
    throw ConfigError("unknown analysis '" + c.analysis + "'");
  }

  if (!doc.contains("model")) throw ConfigError("config.model is missing");
  const json& model = doc.at("model");
  if (model.is_string()) {
    c.model = model.get<std::string>();
  } else if (model.is_object()) {
    c.model = get<std::string>(model, "name", "model");
    c.model_overrides = model;
    c.model_overrides.erase("name");
  } else {
    throw ConfigError("model must be a name or an object with a name");
  }
  const auto models = model_names();
  if (std::find(models.begin(), models.end(), c.model) == models.end()) {
    throw ConfigError("unknown model '" + c.model + "'");
  }
  for (const auto& [key, value] : c.model_overrides.items()) {
    if (c.model != "opto") throw ConfigError("model '" + c.model + "' takes no overrides");
    if (key != "beta" && key != "alpha" && key != "s_minus" && key != "s_plus") {
      throw ConfigError("unknown opto override '" + key + "'");
    }
    if (!value.is_number()) throw ConfigError("opto override '" + key + "' must be a number");
  }

  c.seed = doc.contains("seed") ? get<std::uint64_t>(doc, "seed", "config") : 1;
  if (seed_override) c.seed = *seed_override;
  if (doc.contains("output")) c.output = get<std::string>(doc, "output", "config");
  if (doc.contains("workers")) c.workers = get<unsigned>(doc, "workers", "config");
  if (doc.contains("perturbative")) c.perturbative = get<bool>(doc, "perturbative", "config");
  if (doc.contains("zeta_i")) c.zeta_i = get<double>(doc, "zeta_i", "config");
  if (doc.contains("sim")) c.sim = parse_sim(doc.at("sim"));
  if (doc.contains("mle")) {
    const json& m = doc.at("mle");
    c.mle_iterations = m.value("iterations", c.mle_iterations);
    c.mle_transient = m.value("transient", c.mle_transient);
    if (c.mle_iterations < 100'000 || c.mle_transient < 1000) {
      throw ConfigError("mle needs at least 1e5 iterations and 1e3 transient iterates");
    }
  }
  if (doc.contains("opto_base")) {
    const auto base = get<std::string>(doc, "opto_base", "config");
    if (base == "beta") {
      c.opto_base = OptoBase::beta;
    } else if (base == "unit") {
      c.opto_base = OptoBase::unit;
    } else {
      throw ConfigError("opto_base must be \"beta\" or \"unit\"");
    }
  }

  if (doc.contains("basis")) {
    const auto b = get<std::string>(doc, "basis", "config");
    if (b == "adapted") {
      c.basis = BasisPolicy::adapt_to_mismatch;
    } else if (b == "as_given") {
      c.basis = BasisPolicy::as_given;
    } else {
      throw ConfigError("basis must be \"adapted\" or \"as_given\"");
    }
  }
  if (doc.contains("sigma_grid")) c.sigma_grid = parse_grid(doc.at("sigma_grid"), "sigma_grid");
  if (doc.contains("epsilon_grid")) c.epsilon_grid = parse_grid(doc.at("epsilon_grid"), "epsilon_grid");
  if (doc.contains("zeta_grid")) c.zeta_grid = parse_grid(doc.at("zeta_grid"), "zeta_grid");
  if (doc.contains("s_grid")) c.s_grid = parse_grid(doc.at("s_grid"), "s_grid");
  if (doc.contains("sigma_values")) c.sigma_values = parse_grid(doc.at("sigma_values"), "sigma_values");

  if (doc.contains("network")) c.adjacency = parse_network(doc.at("network"), base_dir);
  if (doc.contains("delta")) {
    if (!c.adjacency) throw ConfigError("delta needs a network");
    const json& d = doc.at("delta");
    const auto n = static_cast<int>(c.adjacency->rows());
    if (d.is_array()) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_number()) throw ConfigError("delta entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = d[i].get<double>();
      }
      if (v.size() != n) throw ConfigError("delta length does not match the network");
      c.delta = v;
      c.delta_source = "inline";
    } else if (d == "random" || (d.is_object() && d.contains("random"))) {
      std::uint64_t s = c.seed;
      if (d.is_object() && d.at("random").is_object() && d.at("random").contains("seed")) {
        s = get<std::uint64_t>(d.at("random"), "seed", "delta.random");
      }
      c.delta = random_mismatch(n, s);
      c.delta_source = "random(seed=" + std::to_string(s) + ")";
    } else {
      throw ConfigError("delta must be an array, \"random\" or {\"random\": {\"seed\": S}}");
    }
  }

  const std::string& a = c.analysis;
  if (a == "curvature") require(!c.zeta_grid.empty(), a, "zeta_grid");
  if (a == "contour" || a == "errormap" || a == "opto") {
    require(c.adjacency.has_value(), a, "network");
    require(c.delta.has_value(), a, "delta");
    require(!c.epsilon_grid.empty(), a, "epsilon_grid");
  }
  if (a == "contour" || a == "errormap") require(!c.sigma_grid.empty(), a, "sigma_grid");
  if (a == "mle" || a == "opto") {
    if (c.model != "opto") throw ConfigError("analysis '" + a + "' needs model \"opto\"");
  }
  if (a == "mle") require(!c.s_grid.empty(), a, "s_grid");
  if (a == "opto") require(!c.sigma_values.empty(), a, "sigma_values");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? "." : path.parent_path(), seed_override);
}

int run_document(const json& doc, const std::filesystem::path& base_dir, const RunOptions& options) {
  std::ostringstream log_buffer;
  const auto log = make_logger(log_buffer);

  ExperimentConfig cfg;
  Inputs inputs;
  try {
    cfg = parse_config(doc, base_dir, options.seed);
    if (options.out) cfg.output = *options.out;
    if (options.workers) cfg.workers = *options.workers;
    inputs = prepare(cfg, *log);
  } catch (const InvalidInput& e) {
    log->error("config error: {}", e.what());
    return kConfigError;
  }

  const json echo = cfg.echo();
  json echo_for_digest = echo;
  echo_for_digest.erase("output");
  log->info("analysis '{}' on model '{}' (input digest {})", cfg.analysis, cfg.model,
            digest(echo_for_digest.dump()));
  if (!cfg.delta_source.empty()) log->info("delta source: {}", cfg.delta_source);

  Artifacts art;
  try {
    if (cfg.analysis == "curvature") art = run_curvature(cfg, inputs, *log);
    if (cfg.analysis == "contour") art = run_contour(cfg, inputs, *log);
    if (cfg.analysis == "errormap") art = run_errormap(cfg, inputs, *log);
    if (cfg.analysis == "mle") art = run_mle(cfg, inputs, *log);
    if (cfg.analysis == "opto") art = run_opto(cfg, inputs, *log);
  } catch (const NumericalError& e) {
    log->error("numerical abort: {}", e.what());
    std::filesystem::create_directories(cfg.output);
    write_text(cfg.output / "run.log", log_buffer.str());
    return kNumericalAbort;
  } catch (const InvalidInput& e) {
    log->error("config error: {}", e.what());
    return kConfigError;
  }

  std::filesystem::create_directories(cfg.output);
  json outputs = json::array();
  for (const auto& [name, table] : art.tables) {
    write_csv(cfg.output / name, table);
    outputs.push_back(name);
  }
  json meta;
  meta["tool"] = "hetsync";
  meta["analysis"] = cfg.analysis;
  meta["config"] = echo;
  meta["seed"] = cfg.seed;
  meta["input_digest"] = digest(echo_for_digest.dump());
  meta["delta_source"] = cfg.delta_source;
  meta["warnings"] = inputs.mismatch ? inputs.mismatch->warnings : std::vector<std::string>{};
  meta["outputs"] = outputs;
  meta["summary"] = art.summary;
  if (cfg.analysis == "errormap") meta["sync_threshold"] = cfg.sim.sync_threshold;
  write_text(cfg.output / "metadata.json", meta.dump(2) + "\n");
  log->info("wrote {} artifact(s) to {}", outputs.size(), cfg.output.string());
  write_text(cfg.output / "run.log", log_buffer.str());
  return kOk;
}

int run(const std::filesystem::path& config_path, const RunOptions& options) {
  json doc;
  {
    std::ifstream in(config_path);
    if (!in) {
      spdlog::error("cannot open config {}", config_path.string());
      return kConfigError;
    }
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      spdlog::error("malformed JSON in {}: {}", config_path.string(), e.what());
      return kConfigError;
    }
  }
  const auto base = config_path.parent_path().empty() ? std::filesystem::path(".") : config_path.parent_path();
  return run_document(doc, base, options);
}

}  // namespace hetsync::cli
