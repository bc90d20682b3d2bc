#pragma once

#include "hetsync/models.hpp"
#include "hetsync/network.hpp"
#include "hetsync/perturb.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hetsync {

/// First run of stable couplings along a sigma grid.
///
/// `lower` equals the first grid point when the grid already starts stable
/// (`lower_clipped`); `upper` is +inf when stability lasts to the end of the
/// grid. Both are NaN for an empty interval.
struct StableInterval {
  bool empty = true;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool lower_clipped = false;

  bool contains(double sigma) const { return !empty && sigma >= lower && sigma <= upper; }
  double boundary(Transition t) const { return t == Transition::lower ? lower : upper; }
};

/// Scans `margin` (negative = stable) on the grid and bisects each flip to `tol`.
StableInterval find_stable_interval(const std::function<double(double)>& margin,
                                    std::span<const double> sigma_grid, double tol);

/// Stability margin of the exact spectrum of M(eps).
double direct_margin(const StabilityMatrices& mats, double eps, const StabilityCriterion& criterion);

/// Stability margin predicted by the second-order expansion. Continuous and
/// unit-disk criteria use the critical branches; the band criterion uses the
/// whole predicted spectrum since both ends matter.
double predicted_margin(const SpectralExpansion& expansion, double eps, const StabilityCriterion& criterion);

/// Stable-sigma intervals per eps from direct eigensolves and from the
/// perturbative prediction.
struct StabilityContour {
  std::vector<double> epsilon;
  std::vector<double> sigma_grid;
  std::vector<StableInterval> direct;
  /// Empty when the perturbative contour was not requested.
  std::vector<StableInterval> perturbative;
  CriterionKind criterion = CriterionKind::negative_real_part;
};

inline constexpr double kSigmaTol = 1e-4;

/// Direct eigensolve contour. An eps with no stable sigma yields an empty
/// interval, not an error.
StabilityContour direct_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                std::span<const double> sigma_grid, std::span<const double> epsilon_grid,
                                double tol = kSigmaTol);

/// Intervals predicted by c0(sigma) + eps c1(sigma) + eps^2 c2(sigma).
/// Propagates DegenerateGap.
std::vector<StableInterval> perturbation_intervals(const Network& net, const MismatchVector& mism,
                                                   const ModelSpec& model, std::span<const double> sigma_grid,
                                                   std::span<const double> epsilon_grid, double tol = kSigmaTol,
                                                   BasisPolicy policy = BasisPolicy::adapt_to_mismatch);

/// Predicted critical sigma per eps for one transition (NaN where none).
std::vector<double> perturbation_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                         std::span<const double> sigma_grid, std::span<const double> epsilon_grid,
                                         Transition transition, double tol = kSigmaTol,
                                         BasisPolicy policy = BasisPolicy::adapt_to_mismatch);

/// Both contours on the same grids.
StabilityContour stability_contour(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                                   std::span<const double> sigma_grid, std::span<const double> epsilon_grid,
                                   bool with_perturbative = true, double tol = kSigmaTol,
                                   BasisPolicy policy = BasisPolicy::adapt_to_mismatch);

// Opto-electronic maps --------------------------------------------------------

/// Base of the unperturbed opto matrix: beta I - sigma Gamma (default) or the
/// unit-feedback variant I - sigma Gamma.
enum class OptoBase { beta, unit };

/// (I + eps Dt)(base I - sigma Gamma) in the network's transverse basis.
Eigen::MatrixXd opto_assemble(const Network& net, const MismatchVector& mism, const OptoModel& opto, double sigma,
                              double eps = 1.0, OptoBase base = OptoBase::beta);

/// Closed-form expansion of the opto matrix eigenvalues, indexed by
/// transverse mode of the mismatch-adapted basis (see adapt_to_mismatch):
///   lambda0_i = b - sigma gamma_i
///   lambda1_i = Dt_ii lambda0_i
///   lambda2_i = -sum_{j != i} Dt_ij^2 lambda0_j lambda0_i / (lambda0_j - lambda0_i)
/// Repeated eigencouplings still coupled after adaptation throw DegenerateGap.
struct OptoExpansion {
  Eigen::VectorXd lambda0;
  Eigen::VectorXd lambda1;
  Eigen::VectorXd lambda2;

  Eigen::VectorXd predict(double eps) const { return lambda0 + eps * lambda1 + eps * eps * lambda2; }
};
OptoExpansion opto_lambda2(const Network& net, const MismatchVector& mism, const OptoModel& opto, double sigma,
                           OptoBase base = OptoBase::beta);

/// Extreme eigenvalues of the opto matrix, real parts.
struct OptoExtremes {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool complex_seen = false;
};
OptoExtremes opto_extremes(const Eigen::MatrixXd& m);

/// Maximum Lyapunov exponent of z <- s DF(x) z along an uncoupled opto
/// trajectory, over a grid of s, with the zero crossings bracketing the
/// negative region.
struct MleCurve {
  std::vector<double> s;
  std::vector<double> psi;
  /// <ln |DF(x_k)|> along the trajectory; psi(s) = ln|s| + this.
  double mean_log_derivative = 0.0;
  std::optional<double> s_minus;
  std::optional<double> s_plus;
  std::uint64_t seed = 0;
  long iterations = 0;
  long transient = 0;
  /// Iterates skipped because DF vanished exactly.
  long skipped = 0;
};

/// Throws InvalidInput when iterations < 1e5 or transient < 1e3.
MleCurve mle_curve(const OptoModel& opto, std::span<const double> s_grid, long iterations = 1'000'000,
                   long transient = 1000, std::uint64_t seed = 1);

/// Lyapunov exponent for one multiplier, given the trajectory average.
double mle_at(double s, double mean_log_derivative);

}  // namespace hetsync
