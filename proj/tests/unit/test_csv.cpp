#include "hetsync/csv.hpp"
#include "hetsync/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace hetsync {
namespace {

TEST(Csv, RoundTripsExactly) {
  const double inf = std::numeric_limits<double>::infinity();
  CsvTable t{{"a", "b", "c"}, {{0.1, 1.0 / 3.0, -inf}, {inf, std::numeric_limits<double>::quiet_NaN(), 1e-300}}};
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  ASSERT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0][0], 0.1);
  EXPECT_EQ(back.rows[0][1], 1.0 / 3.0);
  EXPECT_EQ(back.rows[0][2], -inf);
  EXPECT_EQ(back.rows[1][0], inf);
  EXPECT_TRUE(std::isnan(back.rows[1][1]));
  EXPECT_EQ(back.rows[1][2], 1e-300);
  EXPECT_EQ(back.values("b").size(), 2u);
  EXPECT_THROW(back.column("missing"), InvalidInput);
}

TEST(Csv, RejectsRaggedAndGarbage) {
  std::stringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), InvalidInput);
  std::stringstream garbage("a\nfoo\n");
  EXPECT_THROW(read_csv(garbage), InvalidInput);
}

TEST(Csv, ErrorMapRoundTrip) {
  ErrorMap m;
  m.sigma = {1.0, 2.0};
  m.epsilon = {-0.1, 0.1};
  m.error = {0.5, 1e-4, std::numeric_limits<double>::infinity(), 2e-3};
  m.sync = {false, true, false, true};
  m.threshold = 1e-2;
  const ErrorMap back = error_map_from_table(error_map_table(m), 1e-2);
  EXPECT_EQ(back.sigma, m.sigma);
  EXPECT_EQ(back.epsilon, m.epsilon);
  EXPECT_EQ(back.error, m.error);
  EXPECT_EQ(back.sync, m.sync);
}

}  // namespace
}  // namespace hetsync
