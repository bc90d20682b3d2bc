#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hetsync {

enum class TimeKind { continuous, discrete };
enum class MismatchMode { local_parameter, frequency };
enum class CriterionKind { negative_real_part, unit_disk, real_band };

std::string_view to_string(TimeKind kind);
std::string_view to_string(MismatchMode mode);
std::string_view to_string(CriterionKind kind);

/// How the spectrum of a transverse stability matrix decides stability.
///
/// `margin` is negative exactly when the spectrum is stable:
///   negative_real_part  max Re(lambda)
///   unit_disk           max |lambda| - 1
///   real_band           distance outside [lower, upper] for real eigenvalues,
///                       |lambda| - min(upper, -lower) for complex ones
struct StabilityCriterion {
  CriterionKind kind = CriterionKind::negative_real_part;
  double lower = -1.0;
  double upper = 1.0;

  double margin(const Eigen::VectorXcd& eigenvalues, bool* saw_complex = nullptr) const;
  bool stable(const Eigen::VectorXcd& eigenvalues) const { return margin(eigenvalues) < 0.0; }
};

/// Interval of eigencouplings zeta for which F - zeta H is stable.
/// `upper` is empty when stability persists to the end of the scan.
struct MsfBounds {
  double lower = 0.0;
  std::optional<double> upper;
};

/// Scans zeta in [0, zeta_max] with the given step, takes the first stable
/// run and refines both ends by bisection. Returns nothing if no grid point is
/// stable.
std::optional<MsfBounds> compute_msf_bounds(const Eigen::MatrixXd& F, const Eigen::MatrixXd& H,
                                            const StabilityCriterion& criterion,
                                            double zeta_max = 30.0, double step = 0.01);

/// Local node dynamics. `param_shift` is the mismatch eps*delta_i added to the
/// mismatched parameter (local-parameter mode); frequency-mode models ignore it.
using VectorField =
    std::function<void(std::span<const double> x, double param_shift, std::span<double> out)>;
using CouplingField = std::function<void(std::span<const double> x, std::span<double> out)>;

/// A dynamical model: nonlinear right-hand side (or map) for simulation plus
/// the constant Jacobians consumed by the perturbation engine.
///
/// Continuous, local mode:  x_i' = f(x_i, r_i) - sigma sum_j L_ij h(x_j)
/// Continuous, frequency:   x_i' = (1 + eps d_i) [f(x_i) - sigma sum_j L_ij h(x_j)]
/// Discrete, frequency:     x_i <- [(1 + eps d_i) (f(x_i) - sigma sum_j L_ij h(x_j))] mod m
struct ModelSpec {
  std::string name;
  int state_dim = 0;
  TimeKind time = TimeKind::continuous;
  MismatchMode mode = MismatchMode::local_parameter;
  Eigen::MatrixXd F;
  Eigen::MatrixXd H;
  /// Derivative of the Jacobian with respect to the mismatched parameter.
  /// Zero and unused in frequency mode.
  Eigen::MatrixXd B;
  StabilityCriterion criterion;
  /// Stable eigencoupling interval of the identical-node problem, computed
  /// from F and H.
  MsfBounds msf;
  /// Eigencoupling at which the lower-transition curvature profile is
  /// anchored for this model's reference setup.
  double reference_zeta = 0.0;

  VectorField local;
  CouplingField coupling;
  std::optional<double> modulus;
  /// Starting point for the pre-run that places initial conditions on the attractor.
  Eigen::VectorXd seed_state;

  bool uses_b() const { return mode == MismatchMode::local_parameter; }
};

/// Chua circuit with a mismatch in kappa (the z-equation gain), x-coupled.
ModelSpec chua_local();

/// Chua circuit with heterogeneous frequencies, x-coupled.
ModelSpec chua_frequency();

/// Bernoulli (doubling) maps with heterogeneous frequencies, modulus 1.
ModelSpec bernoulli();

/// Opto-electronic map x <- [beta F(x) + alpha] mod 2pi, F(x) = (1 - cos x)/2.
struct OptoModel {
  double beta = 2.0 * 3.14159265358979323846;
  double alpha = 0.525;

  static double feedback(double x);
  static double feedback_derivative(double x);
  double step(double x) const;
};

/// Throws InvalidInput for beta <= 0.
OptoModel optoelectronic(double beta = 2.0 * 3.14159265358979323846, double alpha = 0.525);

/// Default bounds on the eigenvalues of the opto stability matrix, from the
/// zero crossings of the parametric Lyapunov exponent.
inline constexpr double kOptoBandLower = -3.47;
inline constexpr double kOptoBandUpper = 3.47;

/// Generic-engine view of the opto map: scalar blocks F = beta, H = 1 in
/// frequency mode, with the band criterion [s_minus, s_plus].
ModelSpec opto_spec(const OptoModel& opto, double s_minus = kOptoBandLower,
                    double s_plus = kOptoBandUpper);

/// Registry lookup: "chua_local" | "chua_freq" | "bernoulli" | "opto".
/// `overrides` may carry {"beta", "alpha", "s_minus", "s_plus"} for "opto".
ModelSpec make_model(std::string_view name, const nlohmann::json& overrides = nlohmann::json::object());
std::vector<std::string> model_names();

}  // namespace hetsync
