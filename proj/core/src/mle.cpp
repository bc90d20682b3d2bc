#include "hetsync/errors.hpp"
#include "hetsync/stability.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hetsync {
namespace {

double mean_log_derivative(const OptoModel& opto, long iterations, long transient, std::uint64_t seed,
                           long& skipped) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> start(0.0, 2.0 * std::numbers::pi);
  double x = start(rng);
  for (long k = 0; k < transient; ++k) x = opto.step(x);

  // Kahan summation keeps the 1e6-term average exact to ~1e-15.
  double sum = 0.0;
  double carry = 0.0;
  long used = 0;
  skipped = 0;
  for (long k = 0; k < iterations; ++k) {
    const double d = std::abs(OptoModel::feedback_derivative(x));
    if (d == 0.0) {
      ++skipped;
    } else {
      const double y = std::log(d) - carry;
      const double t = sum + y;
      carry = (t - sum) - y;
      sum = t;
      ++used;
    }
    x = opto.step(x);
  }
  if (used == 0) throw NumericalError("opto trajectory never left a critical point of the map");
  return sum / static_cast<double>(used);
}

double bisect_zero(double lo, double hi, double mean) {
  // psi(lo) and psi(hi) have opposite signs.
  const bool lo_negative = mle_at(lo, mean) < 0.0;
  while (std::abs(hi - lo) > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if ((mle_at(mid, mean) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double mle_at(double s, double mean_log_derivative) {
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(s)) + mean_log_derivative;
}

MleCurve mle_curve(const OptoModel& opto, std::span<const double> s_grid, long iterations, long transient,
                   std::uint64_t seed) {
  if (iterations < 100'000) throw InvalidInput("MLE needs at least 1e5 averaging iterations");
  if (transient < 1000) throw InvalidInput("MLE needs a transient of at least 1e3 iterations");
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > s_grid[i - 1])) throw InvalidInput("s grid must be strictly increasing");
  }

  MleCurve out;
  out.seed = seed;
  out.iterations = iterations;
  out.transient = transient;
  out.mean_log_derivative = mean_log_derivative(opto, iterations, transient, seed, out.skipped);
  out.s.assign(s_grid.begin(), s_grid.end());
  out.psi.reserve(s_grid.size());
  for (double s : s_grid) out.psi.push_back(mle_at(s, out.mean_log_derivative));

  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    const double a = out.psi[i - 1];
    const double b = out.psi[i];
    if (s_grid[i] <= 0.0 && a >= 0.0 && b < 0.0 && !out.s_minus) {
      out.s_minus = bisect_zero(s_grid[i - 1], s_grid[i], out.mean_log_derivative);
    }
    if (s_grid[i - 1] >= 0.0 && a < 0.0 && b >= 0.0 && !out.s_plus) {
      out.s_plus = bisect_zero(s_grid[i - 1], s_grid[i], out.mean_log_derivative);
    }
  }
  return out;
}

}  // namespace hetsync
