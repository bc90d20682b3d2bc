#include "hetsync/models.hpp"

#include "hetsync/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace hetsync {

std::string_view to_string(TimeKind kind) {
  return kind == TimeKind::continuous ? "continuous" : "discrete";
}

std::string_view to_string(MismatchMode mode) {
  return mode == MismatchMode::local_parameter ? "local_parameter" : "frequency";
}

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::negative_real_part:
      return "negative_real_part";
    case CriterionKind::unit_disk:
      return "unit_disk";
    case CriterionKind::real_band:
      return "real_band";
  }
  return "unknown";
}

double StabilityCriterion::margin(const Eigen::VectorXcd& eigenvalues, bool* saw_complex) const {
  double worst = -std::numeric_limits<double>::infinity();
  bool complex_seen = false;
  for (const auto& lambda : eigenvalues) {
    double m = 0.0;
    switch (kind) {
      case CriterionKind::negative_real_part:
        m = lambda.real();
        break;
      case CriterionKind::unit_disk:
        m = std::abs(lambda) - 1.0;
        break;
      case CriterionKind::real_band:
        if (std::abs(lambda.imag()) <= 1e-10 * std::max(1.0, std::abs(lambda))) {
          m = std::max(lambda.real() - upper, lower - lambda.real());
        } else {
          complex_seen = true;
          m = std::abs(lambda) - std::min(upper, -lower);
        }
        break;
    }
    worst = std::max(worst, m);
  }
  if (saw_complex != nullptr) *saw_complex = complex_seen;
  return worst;
}

std::optional<MsfBounds> compute_msf_bounds(const Eigen::MatrixXd& F, const Eigen::MatrixXd& H,
                                            const StabilityCriterion& criterion, double zeta_max,
                                            double step) {
  auto margin = [&](double zeta) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(F - zeta * H, false);
    return criterion.margin(es.eigenvalues());
  };
  auto refine = [&](double lo, double hi) {
    // Invariant: stability differs at lo and hi.
    const bool lo_stable = margin(lo) < 0.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if ((margin(mid) < 0.0) == lo_stable) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  const auto count = static_cast<int>(std::floor(zeta_max / step + 0.5));
  std::optional<MsfBounds> bounds;
  bool prev_stable = margin(0.0) < 0.0;
  if (prev_stable) bounds = MsfBounds{0.0, std::nullopt};
  for (int k = 1; k <= count; ++k) {
    const double zeta = k * step;
    const bool now_stable = margin(zeta) < 0.0;
    if (now_stable && !prev_stable && !bounds) {
      bounds = MsfBounds{refine((k - 1) * step, zeta), std::nullopt};
    } else if (!now_stable && prev_stable && bounds) {
      bounds->upper = refine((k - 1) * step, zeta);
      break;
    }
    prev_stable = now_stable;
  }
  return bounds;
}

namespace {

struct ChuaShape {
  double gain;       // beta (local) or eta (frequency)
  double y_damping;  // alpha in the y-equation
  double z_gain;     // kappa or -1/k
  double inner = -1.44;
  double outer = -0.72;

  double g(double x) const {
    return outer * x + 0.5 * (outer - inner) * (std::abs(x - 1.0) - std::abs(x + 1.0));
  }

  Eigen::MatrixXd jacobian() const {
    Eigen::MatrixXd f(3, 3);
    f << gain * (-1.0 - outer), gain, 0.0,
         1.0, -y_damping, 1.0,
         0.0, z_gain, 0.0;
    return f;
  }
};

Eigen::MatrixXd first_component_coupling(int n) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h(0, 0) = 1.0;
  return h;
}

void finish(ModelSpec& m) {
  const auto bounds = compute_msf_bounds(m.F, m.H, m.criterion);
  if (!bounds) throw InvalidInput("model " + m.name + " has no stable eigencoupling in [0, 30]");
  m.msf = *bounds;
}

ModelSpec chua_common(std::string name, ChuaShape shape, MismatchMode mode) {
  ModelSpec m;
  m.name = std::move(name);
  m.state_dim = 3;
  m.time = TimeKind::continuous;
  m.mode = mode;
  m.F = shape.jacobian();
  m.H = first_component_coupling(3);
  m.B = Eigen::MatrixXd::Zero(3, 3);
  if (mode == MismatchMode::local_parameter) m.B(2, 1) = 1.0;
  m.criterion = {CriterionKind::negative_real_part};
  m.reference_zeta = 6.0;
  const bool shifts_z_gain = mode == MismatchMode::local_parameter;
  m.local = [shape, shifts_z_gain](std::span<const double> x, double shift, std::span<double> out) {
    out[0] = shape.gain * (x[1] - x[0] - shape.g(x[0]));
    out[1] = x[0] - shape.y_damping * x[1] + x[2];
    out[2] = (shape.z_gain + (shifts_z_gain ? shift : 0.0)) * x[1];
  };
  m.coupling = [](std::span<const double> x, std::span<double> out) {
    out[0] = x[0];
    out[1] = 0.0;
    out[2] = 0.0;
  };
  m.seed_state = Eigen::Vector3d(0.1, 0.0, 0.0);
  finish(m);
  return m;
}

}  // namespace

ModelSpec chua_local() {
  return chua_common("chua_local", ChuaShape{10.0, 1.0, -17.85}, MismatchMode::local_parameter);
}

ModelSpec chua_frequency() {
  return chua_common("chua_freq", ChuaShape{10.0, 1.0, -1.0 / 0.056}, MismatchMode::frequency);
}

ModelSpec bernoulli() {
  ModelSpec m;
  m.name = "bernoulli";
  m.state_dim = 1;
  m.time = TimeKind::discrete;
  m.mode = MismatchMode::frequency;
  m.F = Eigen::MatrixXd::Constant(1, 1, 2.0);
  m.H = Eigen::MatrixXd::Constant(1, 1, 1.0);
  m.B = Eigen::MatrixXd::Zero(1, 1);
  m.criterion = {CriterionKind::unit_disk};
  m.local = [](std::span<const double> x, double, std::span<double> out) { out[0] = 2.0 * x[0]; };
  m.coupling = [](std::span<const double> x, std::span<double> out) { out[0] = x[0]; };
  m.modulus = 1.0;
  m.seed_state = Eigen::VectorXd::Constant(1, 0.1234);
  finish(m);
  m.reference_zeta = m.msf.lower;
  return m;
}

double OptoModel::feedback(double x) { return 0.5 * (1.0 - std::cos(x)); }

double OptoModel::feedback_derivative(double x) { return 0.5 * std::sin(x); }

double OptoModel::step(double x) const {
  const double y = beta * feedback(x) + alpha;
  const double two_pi = 2.0 * std::numbers::pi;
  return y - two_pi * std::floor(y / two_pi);
}

OptoModel optoelectronic(double beta, double alpha) {
  if (!(beta > 0.0)) throw InvalidInput("opto-electronic self-feedback strength beta must be positive");
  if (!std::isfinite(alpha)) throw InvalidInput("opto-electronic offset alpha must be finite");
  return OptoModel{beta, alpha};
}

ModelSpec opto_spec(const OptoModel& opto, double s_minus, double s_plus) {
  if (!(s_minus < s_plus)) throw InvalidInput("opto band needs s_minus < s_plus");
  ModelSpec m;
  m.name = "opto";
  m.state_dim = 1;
  m.time = TimeKind::discrete;
  m.mode = MismatchMode::frequency;
  m.F = Eigen::MatrixXd::Constant(1, 1, opto.beta);
  m.H = Eigen::MatrixXd::Constant(1, 1, 1.0);
  m.B = Eigen::MatrixXd::Zero(1, 1);
  m.criterion = {CriterionKind::real_band, s_minus, s_plus};
  const double beta = opto.beta;
  const double alpha = opto.alpha;
  m.local = [beta, alpha](std::span<const double> x, double, std::span<double> out) {
    out[0] = beta * OptoModel::feedback(x[0]) + alpha;
  };
  m.coupling = [](std::span<const double> x, std::span<double> out) {
    out[0] = OptoModel::feedback(x[0]);
  };
  m.modulus = 2.0 * std::numbers::pi;
  m.seed_state = Eigen::VectorXd::Constant(1, 0.5);
  finish(m);
  m.reference_zeta = m.msf.lower;
  return m;
}

ModelSpec make_model(std::string_view name, const nlohmann::json& overrides) {
  if (name == "chua_local") return chua_local();
  if (name == "chua_freq") return chua_frequency();
  if (name == "bernoulli") return bernoulli();
  if (name == "opto") {
    const double beta = overrides.value("beta", 2.0 * std::numbers::pi);
    const double alpha = overrides.value("alpha", 0.525);
    const double s_minus = overrides.value("s_minus", kOptoBandLower);
    const double s_plus = overrides.value("s_plus", kOptoBandUpper);
    return opto_spec(optoelectronic(beta, alpha), s_minus, s_plus);
  }
  throw InvalidInput("unknown model \"" + std::string(name) + "\"");
}

std::vector<std::string> model_names() { return {"chua_local", "chua_freq", "bernoulli", "opto"}; }

}  // namespace hetsync
