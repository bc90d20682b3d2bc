#include "hetsync/sim.hpp"

#include "hetsync/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <cmath>
#include <random>
#include <thread>

namespace hetsync {
namespace {

double wrap(double x, double m) { return x - m * std::floor(x / m); }

// Right-hand side (or map update before the modulus) of the coupled network.
class NetworkField {
 public:
  NetworkField(const Network& net, const MismatchVector& mism, const ModelSpec& model, double sigma, double eps)
      : model_(model),
        laplacian_(net.laplacian),
        sigma_(sigma),
        n_(model.state_dim),
        nodes_(net.size()),
        shift_(nodes_),
        scale_(nodes_),
        coupled_(static_cast<std::size_t>(nodes_ * n_)),
        scratch_(static_cast<std::size_t>(n_)) {
    for (int i = 0; i < nodes_; ++i) {
      const double d = eps * mism.delta(i);
      shift_[i] = model.mode == MismatchMode::local_parameter ? d : 0.0;
      scale_[i] = model.mode == MismatchMode::frequency ? 1.0 + d : 1.0;
    }
  }

  void operator()(std::span<const double> x, std::span<double> out) {
    const auto n = static_cast<std::size_t>(n_);
    for (int j = 0; j < nodes_; ++j) {
      model_.coupling(x.subspan(j * n, n), std::span<double>(coupled_).subspan(j * n, n));
    }
    for (int i = 0; i < nodes_; ++i) {
      auto out_i = out.subspan(i * n, n);
      model_.local(x.subspan(i * n, n), shift_[i], out_i);
      for (std::size_t c = 0; c < n; ++c) scratch_[c] = 0.0;
      for (int j = 0; j < nodes_; ++j) {
        const double l = laplacian_(i, j);
        if (l == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) scratch_[c] += l * coupled_[j * n + c];
      }
      for (std::size_t c = 0; c < n; ++c) out_i[c] = scale_[i] * (out_i[c] - sigma_ * scratch_[c]);
    }
  }

 private:
  const ModelSpec& model_;
  const Eigen::MatrixXd& laplacian_;
  double sigma_;
  int n_;
  int nodes_;
  std::vector<double> shift_;
  std::vector<double> scale_;
  std::vector<double> coupled_;
  std::vector<double> scratch_;
};

class Rk4 {
 public:
  explicit Rk4(std::size_t size) : k1_(size), k2_(size), k3_(size), k4_(size), tmp_(size) {}

  template <typename Field>
  void step(Field& f, std::vector<double>& x, double dt) {
    const std::size_t size = x.size();
    f(x, k1_);
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
    f(tmp_, k2_);
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
    f(tmp_, k3_);
    for (std::size_t i = 0; i < size; ++i) tmp_[i] = x[i] + dt * k3_[i];
    f(tmp_, k4_);
    for (std::size_t i = 0; i < size; ++i) x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

long steps_for(double duration, double dt) { return static_cast<long>(std::llround(duration / dt)); }

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidInput("sim dt must be positive");
  if (!(t_average > 0.0) || t_transient < 0.0) throw InvalidInput("sim time windows must be positive");
  if (map_average <= 0 || map_transient < 0) throw InvalidInput("sim iterate windows must be positive");
  if (!(sync_threshold > 0.0)) throw InvalidInput("sync threshold must be positive");
  if (perturbation < 0.0) throw InvalidInput("initial perturbation must be nonnegative");
  if (!(divergence_guard > 0.0)) throw InvalidInput("divergence guard must be positive");
}

Eigen::VectorXd attractor_point(const ModelSpec& model, const SimConfig& cfg) {
  const auto n = static_cast<std::size_t>(model.state_dim);
  std::vector<double> x(model.seed_state.data(), model.seed_state.data() + n);
  std::vector<double> dx(n);
  auto field = [&](std::span<const double> s, std::span<double> out) { model.local(s, 0.0, out); };
  if (model.time == TimeKind::continuous) {
    Rk4 rk(n);
    const long steps = steps_for(cfg.prerun_time, cfg.dt);
    for (long k = 0; k < steps; ++k) rk.step(field, x, cfg.dt);
  } else {
    for (long k = 0; k < cfg.prerun_iterations; ++k) {
      field(x, dx);
      for (std::size_t c = 0; c < n; ++c) x[c] = model.modulus ? wrap(dx[c], *model.modulus) : dx[c];
    }
  }
  return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
}

SimResult simulate(const Network& net, const MismatchVector& mism, const ModelSpec& model, double sigma, double eps,
                   const SimConfig& cfg, std::uint64_t cell_index) {
  cfg.validate();
  if (mism.size() != net.size()) throw InvalidInput("mismatch vector does not match the network size");
  if (sigma < 0.0) throw InvalidInput("coupling strength sigma must be nonnegative");

  const int nodes = net.size();
  const auto n = static_cast<std::size_t>(model.state_dim);
  const std::size_t size = n * static_cast<std::size_t>(nodes);

  const Eigen::VectorXd base = attractor_point(model, cfg);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cell_index), static_cast<std::uint32_t>(cell_index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> noise(-cfg.perturbation, cfg.perturbation);
  std::vector<double> x(size);
  for (int i = 0; i < nodes; ++i) {
    for (std::size_t c = 0; c < n; ++c) x[i * n + c] = base(static_cast<Eigen::Index>(c)) + noise(rng);
  }

  NetworkField field(net, mism, model, sigma, eps);
  std::vector<double> mean(n);
  double error_sum = 0.0;
  double dev_sum = 0.0;
  long samples = 0;

  auto observe = [&]() {
    for (std::size_t c = 0; c < n; ++c) mean[c] = 0.0;
    for (int i = 0; i < nodes; ++i) {
      for (std::size_t c = 0; c < n; ++c) mean[c] += x[i * n + c];
    }
    for (std::size_t c = 0; c < n; ++c) mean[c] /= nodes;
    double sq = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double d = x[i * n] - mean[0];
      sq += d * d;
    }
    double dev = 0.0;
    for (std::size_t c = 0; c < n; ++c) dev += (mean[c] - x[c]) * (mean[c] - x[c]);
    error_sum += std::sqrt(sq / nodes);
    dev_sum += std::sqrt(dev);
    ++samples;
  };
  auto blown_up = [&]() {
    for (double v : x) {
      if (!std::isfinite(v) || std::abs(v) > cfg.divergence_guard) return true;
    }
    return false;
  };
  const SimResult diverged{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true};

  if (model.time == TimeKind::continuous) {
    Rk4 rk(size);
    const long transient = steps_for(cfg.t_transient, cfg.dt);
    const long average = steps_for(cfg.t_average, cfg.dt);
    for (long k = 0; k < transient + average; ++k) {
      rk.step(field, x, cfg.dt);
      if (k % 1000 == 0 && blown_up()) return diverged;
      if (k >= transient) observe();
    }
  } else {
    std::vector<double> next(size);
    for (long k = 0; k < cfg.map_transient + cfg.map_average; ++k) {
      field(x, next);
      for (std::size_t i = 0; i < size; ++i) x[i] = model.modulus ? wrap(next[i], *model.modulus) : next[i];
      if (!model.modulus && blown_up()) return diverged;
      if (k >= cfg.map_transient) observe();
    }
  }
  if (blown_up()) return diverged;
  return {error_sum / samples, dev_sum / samples, false};
}

ErrorMap error_map(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                   std::span<const double> sigma_grid, std::span<const double> epsilon_grid, const SimConfig& cfg,
                   unsigned workers) {
  cfg.validate();
  for (std::size_t i = 1; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > sigma_grid[i - 1])) throw InvalidInput("sigma grid must be strictly increasing");
  }
  for (std::size_t i = 1; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > epsilon_grid[i - 1])) throw InvalidInput("epsilon grid must be strictly increasing");
  }

  ErrorMap out;
  out.sigma.assign(sigma_grid.begin(), sigma_grid.end());
  out.epsilon.assign(epsilon_grid.begin(), epsilon_grid.end());
  out.threshold = cfg.sync_threshold;
  const std::size_t cells = out.sigma.size() * out.epsilon.size();
  out.error.assign(cells, 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next++; c < cells; c = next++) {
      const std::size_t e = c / out.sigma.size();
      const std::size_t s = c % out.sigma.size();
      out.error[c] = simulate(net, mism, model, out.sigma[s], out.epsilon[e], cfg, c).error;
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(cells, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          worker();
        } catch (...) {
          errors[w] = std::current_exception();
          next = cells;
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  out.sync.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) out.sync[c] = out.error[c] < out.threshold;
  return out;
}

}  // namespace hetsync
