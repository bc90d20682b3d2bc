#include "hetsync/stability.hpp"

#include "hetsync/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace hetsync {
namespace {

void require_monotone(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InvalidInput(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InvalidInput(std::string(what) + " grid has non-finite values");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidInput(std::string(what) + " grid must be strictly increasing");
  }
}

// Bisects a stability flip between lo and hi; `lo_stable` is the state at lo.
double bisect_flip(const std::function<double(double)>& margin, double lo, double hi, bool lo_stable, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if ((margin(mid) < 0.0) == lo_stable) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

StableInterval find_stable_interval(const std::function<double(double)>& margin, std::span<const double> sigma_grid,
                                    double tol) {
  StableInterval out;
  std::size_t first = sigma_grid.size();
  std::vector<bool> stable(sigma_grid.size());
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    stable[i] = margin(sigma_grid[i]) < 0.0;
    if (stable[i] && first == sigma_grid.size()) first = i;
    if (first != sigma_grid.size() && !stable[i]) break;
  }
  if (first == sigma_grid.size()) return out;

  out.empty = false;
  if (first == 0) {
    out.lower = sigma_grid[0];
    out.lower_clipped = true;
  } else {
    out.lower = bisect_flip(margin, sigma_grid[first - 1], sigma_grid[first], false, tol);
  }
  out.upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = first + 1; i < sigma_grid.size(); ++i) {
    if (!stable[i]) {
      out.upper = bisect_flip(margin, sigma_grid[i - 1], sigma_grid[i], true, tol);
      break;
    }
  }
  return out;
}

double direct_margin(const StabilityMatrices& mats, double eps, const StabilityCriterion& criterion) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(mats.at(eps), false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve of the stability matrix failed");
  return criterion.margin(es.eigenvalues());
}

double predicted_margin(const SpectralExpansion& expansion, double eps, const StabilityCriterion& criterion) {
  switch (criterion.kind) {
    case CriterionKind::negative_real_part:
      return expansion.critical_value(eps);
    case CriterionKind::unit_disk:
      return expansion.critical_value(eps) - 1.0;
    case CriterionKind::real_band:
      return criterion.margin(expansion.predict(eps));
  }
  return 0.0;
}

StabilityContour direct_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                std::span<const double> sigma_grid, std::span<const double> epsilon_grid, double tol) {
  require_monotone(sigma_grid, "sigma");
  require_monotone(epsilon_grid, "epsilon");
  StabilityContour out;
  out.epsilon.assign(epsilon_grid.begin(), epsilon_grid.end());
  out.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
  out.criterion = model.criterion.kind;
  for (double eps : epsilon_grid) {
    auto margin = [&](double sigma) {
      return direct_margin(assemble(net, mism, model, sigma, BasisPolicy::as_given), eps, model.criterion);
    };
    out.direct.push_back(find_stable_interval(margin, sigma_grid, tol));
  }
  return out;
}

std::vector<StableInterval> perturbation_intervals(const Network& net, const MismatchVector& mism,
                                                   const ModelSpec& model, std::span<const double> sigma_grid,
                                                   std::span<const double> epsilon_grid, double tol,
                                                   BasisPolicy policy) {
  require_monotone(sigma_grid, "sigma");
  require_monotone(epsilon_grid, "epsilon");
  std::vector<StableInterval> out;
  out.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    auto margin = [&](double sigma) {
      return predicted_margin(expand_eigenvalues(assemble(net, mism, model, sigma, policy)), eps, model.criterion);
    };
    out.push_back(find_stable_interval(margin, sigma_grid, tol));
  }
  return out;
}

std::vector<double> perturbation_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                         std::span<const double> sigma_grid, std::span<const double> epsilon_grid,
                                         Transition transition, double tol, BasisPolicy policy) {
  std::vector<double> out;
  for (const auto& iv : perturbation_intervals(net, mism, model, sigma_grid, epsilon_grid, tol, policy)) {
    out.push_back(iv.empty ? std::numeric_limits<double>::quiet_NaN() : iv.boundary(transition));
  }
  return out;
}

StabilityContour stability_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                   std::span<const double> sigma_grid, std::span<const double> epsilon_grid,
                                   bool with_perturbative, double tol, BasisPolicy policy) {
  StabilityContour out = direct_contour(net, mism, model, sigma_grid, epsilon_grid, tol);
  if (with_perturbative) out.perturbative = perturbation_intervals(net, mism, model, sigma_grid, epsilon_grid, tol, policy);
  return out;
}

Eigen::MatrixXd opto_assemble(const Network& net, const MismatchVector& mism, const OptoModel& opto, double sigma,
                              double eps, OptoBase base) {
  if (!(sigma > 0.0)) throw InvalidInput("coupling strength sigma must be positive");
  if (mism.size() != net.size()) throw InvalidInput("mismatch vector does not match the network size");
  const auto m = net.modes();
  const double b = base == OptoBase::beta ? opto.beta : 1.0;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd m0 = b * eye - sigma * net.gamma_matrix();
  return (eye + eps * mism.projected) * m0;
}

OptoExpansion opto_lambda2(const Network& net, const MismatchVector& mism, const OptoModel& opto, double sigma,
                           OptoBase base) {
  if (!(sigma > 0.0)) throw InvalidInput("coupling strength sigma must be positive");
  if (mism.size() != net.size()) throw InvalidInput("mismatch vector does not match the network size");
  const AdaptedModes adapted = adapt_to_mismatch(net, mism);
  const auto m = net.modes();
  const double b = base == OptoBase::beta ? opto.beta : 1.0;
  const Eigen::MatrixXd& dt = adapted.mismatch.projected;

  OptoExpansion out;
  out.lambda0 = (b - sigma * adapted.network.gamma.array()).matrix();
  out.lambda1 = dt.diagonal().cwiseProduct(out.lambda0);
  out.lambda2 = Eigen::VectorXd::Zero(m);
  const double floor = kGapFloor * out.lambda0.norm();
  for (Eigen::Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i) continue;
      const double gap = out.lambda0(j) - out.lambda0(i);
      const double w = dt(i, j) * dt(i, j);
      if (std::abs(gap) < floor) {
        if (w * std::abs(out.lambda0(i) * out.lambda0(j)) > kCouplingFloor) {
          throw DegenerateGap(static_cast<int>(i), 0, static_cast<int>(j), 0, std::abs(gap), "opto expansion");
        }
        continue;
      }
      acc += w * out.lambda0(j) * out.lambda0(i) / gap;
    }
    out.lambda2(i) = -acc;
  }
  return out;
}

OptoExtremes opto_extremes(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("opto eigensolve failed");
  OptoExtremes out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& z : es.eigenvalues()) {
    if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z))) out.complex_seen = true;
    out.lambda_min = std::min(out.lambda_min, z.real());
    out.lambda_max = std::max(out.lambda_max, z.real());
  }
  return out;
}

}  // namespace hetsync
