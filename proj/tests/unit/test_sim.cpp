#include "hetsync/errors.hpp"
#include "hetsync/sim.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace hetsync {
namespace {

SimConfig short_chua() {
  SimConfig c;
  c.dt = 2e-3;
  c.t_transient = 100.0;
  c.t_average = 50.0;
  c.prerun_time = 50.0;
  return c;
}

SimConfig short_map() {
  SimConfig c;
  c.map_transient = 2000;
  c.map_average = 2000;
  return c;
}

TEST(SimConfig, RejectsNonsense) {
  SimConfig ok;
  EXPECT_NO_THROW(ok.validate());
  for (auto mutate : {+[](SimConfig& c) { c.dt = 0.0; }, +[](SimConfig& c) { c.t_average = -1.0; },
                      +[](SimConfig& c) { c.map_average = 0; }, +[](SimConfig& c) { c.sync_threshold = 0.0; },
                      +[](SimConfig& c) { c.perturbation = -1e-3; }}) {
    SimConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), InvalidInput);
  }
}

class ChuaK3 : public ::testing::Test {
 protected:
  Network net = build_network(testing::complete_graph(3));
  MismatchVector mm = project_mismatch(net, testing::fig2_delta());
};

TEST_F(ChuaK3, IdenticalNodesSynchronize) {
  const SimResult r = simulate(net, mm, chua_local(), 2.5, 0.0, short_chua());
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.error, 1e-3);
}

TEST_F(ChuaK3, UncoupledNodesDoNot) {
  SimConfig c = short_chua();
  c.perturbation = 0.1;
  const SimResult r = simulate(net, mm, chua_local(), 0.0, 0.0, c);
  EXPECT_TRUE(r.diverged || r.error > 0.1);
}

// The time average of a chaotic trajectory converges slowly, so the window is
// long enough for the statistical spread to sit well below the 5% bound.
TEST_F(ChuaK3, StepHalvingChangesErrorLittle) {
  SimConfig c;
  c.t_average = 8000.0;
  const double coarse = simulate(net, mm, chua_local(), 2.5, 0.1, c).error;
  c.dt /= 2.0;
  const double fine = simulate(net, mm, chua_local(), 2.5, 0.1, c).error;
  ASSERT_TRUE(std::isfinite(coarse));
  EXPECT_LT(std::abs(coarse - fine), 0.05 * fine);
}

TEST_F(ChuaK3, MeanDeviationBoundedBySyncError) {
  const SimConfig c = short_chua();
  for (double eps : {0.0, 0.05, 0.1}) {
    const SimResult r = simulate(net, mm, chua_local(), 2.5, eps, c);
    if (r.error < c.sync_threshold) EXPECT_LT(r.mean_node_deviation, 10.0 * r.error + 1e-12) << eps;
  }
}

TEST_F(ChuaK3, ErrorMapIndependentOfWorkers) {
  const std::vector<double> sigma = {1.5, 2.5, 3.0};
  const std::vector<double> eps = {-0.1, 0.0, 0.1};
  SimConfig c = short_chua();
  c.t_transient = 20.0;
  c.t_average = 10.0;
  const ErrorMap one = error_map(net, mm, chua_local(), sigma, eps, c, 1);
  const ErrorMap three = error_map(net, mm, chua_local(), sigma, eps, c, 3);
  ASSERT_EQ(one.error.size(), 9u);
  for (std::size_t i = 0; i < one.error.size(); ++i) {
    if (std::isnan(one.error[i])) continue;
    EXPECT_EQ(one.error[i], three.error[i]) << i;
    EXPECT_EQ(one.sync[i], three.sync[i]);
  }
  EXPECT_EQ(one.index(2, 1), 7u);
  EXPECT_EQ(one.threshold, c.sync_threshold);
}

TEST_F(ChuaK3, SeedChangesInitialNoise) {
  SimConfig a = short_chua();
  SimConfig b = a;
  b.seed = 99;
  EXPECT_NE(simulate(net, mm, chua_local(), 2.5, 0.1, a).error, simulate(net, mm, chua_local(), 2.5, 0.1, b).error);
  EXPECT_EQ(simulate(net, mm, chua_local(), 2.5, 0.1, a, 4).error,
            simulate(net, mm, chua_local(), 2.5, 0.1, a, 4).error);
}

TEST(SimBernoulli, SyncBandShrinksWithMismatch) {
  const Network net = build_network(testing::fig4_adjacency());
  const MismatchVector mm = project_mismatch(net, testing::fig4_delta());
  const auto sigma = testing::linspace_step(0.18, 0.01, 20);
  const std::vector<double> eps = {0.0, 0.3};
  const ErrorMap m = error_map(net, mm, bernoulli(), sigma, eps, short_map(), 0);
  std::size_t at_zero = 0;
  std::size_t at_large = 0;
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    at_zero += m.sync[m.index(0, s)];
    at_large += m.sync[m.index(1, s)];
  }
  EXPECT_GT(at_zero, at_large);
}

TEST(SimOpto, IdenticalMapsSynchronizeInsideMsfWindow) {
  const Network net = build_network(testing::fig6_adjacency());
  const MismatchVector mm = project_mismatch(net, testing::fig6_delta());
  // beta - sigma gamma stays inside (-3.47, 3.47) for every transverse mode.
  const SimResult r = simulate(net, mm, opto_spec(optoelectronic()), 1.4, 0.0, short_map());
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.error, 1e-6);
}

// Doubling in binary floating point sheds one mantissa bit per iterate, so the
// Bernoulli pre-run lands on the fixed point 0; only the others are checked.
TEST(Attractor, PointIsFiniteAndOffOrigin) {
  EXPECT_EQ(attractor_point(bernoulli(), SimConfig{})(0), 0.0);
  for (const ModelSpec& m : {chua_local(), chua_frequency(), opto_spec(optoelectronic())}) {
    const Eigen::VectorXd x = attractor_point(m, SimConfig{});
    EXPECT_TRUE(x.allFinite()) << m.name;
    EXPECT_GT(x.norm(), 0.0) << m.name;
  }
}

}  // namespace
}  // namespace hetsync
