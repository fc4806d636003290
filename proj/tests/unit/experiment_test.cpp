#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dlo/experiment.hpp"
#include "test_support.hpp"

namespace dlo {
namespace {

using test::fixture;

TEST(Grid, AxesIncludeBothEnds) {
  const GridSpec g;
  const auto xs = g.xs();
  const auto ys = g.ys();
  ASSERT_EQ(xs.size(), 15u);
  ASSERT_EQ(ys.size(), 8u);
  EXPECT_NEAR(xs.back(), 0.7, 1e-12);
  EXPECT_NEAR(ys.back(), 0.75, 1e-12);
}

TEST(Grid, RejectsBadSpacing) {
  GridSpec g;
  g.spacing = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = GridSpec{};
  g.x_min = 1.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Sweep, SingleReachableCellIsExactForBothMethods) {
  const ObjectParams p = fixture("ob1");
  const Point2 offset = endpoint_offset(settled_equilibrium(0.0, p).theta, 0.0, p);
  const Point2 goal = Point2(0.0, 0.333) + offset;
  const GridSpec g{goal.x(), goal.x(), goal.y(), goal.y(), 0.1};
  const SweepResult r = workspace_sweep(p, p, g);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_LT(r.model_mean, 1e-9);
  EXPECT_LT(r.baseline_mean, 1e-9);
}

TEST(Sweep, ParallelMatchesSerial) {
  const ObjectParams p = fixture("ob2");
  const GridSpec g{-0.3, 0.3, 0.0, 0.4, 0.2};
  SweepOptions serial;
  SweepOptions parallel;
  parallel.jobs = 4;
  const SweepResult a = workspace_sweep(p, p, g, serial);
  const SweepResult b = workspace_sweep(p, p, g, parallel);
  std::ostringstream sa;
  std::ostringstream sb;
  write_sweep_csv(sa, a);
  write_sweep_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.model_mean, b.model_mean);
}

TEST(Sweep, ModelBeatsBaselineOnDefaultGrid) {
  const ObjectParams p = fixture("ob1");
  SweepOptions opts;
  opts.jobs = 4;
  const SweepResult r = workspace_sweep(p, p, GridSpec{}, opts);
  EXPECT_EQ(r.evaluated, r.cells.size());
  EXPECT_LT(r.model_mean, r.baseline_mean);
  std::ostringstream os;
  write_sweep_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "gx,gy,x*,y*,phi*,theta0*,theta1*,pred_ex,pred_ey,cost");
}

TEST(Orientation, GoalsSpanHalfTurn) {
  const auto goals = orientation_goals();
  ASSERT_EQ(goals.size(), 13u);
  EXPECT_NEAR(goals.front(), -std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(goals.back(), std::numbers::pi / 2, 1e-12);
}

TEST(Orientation, ReachableGoalsAreExactAgainstMatchingPlant) {
  const ObjectParams p = fixture("ob6");
  const double goals[] = {0.0, 0.5, 1.2};
  const auto cells = orientation_sweep(p, p, Point2(0.0, 0.4), goals);
  for (const auto& c : cells) {
    ASSERT_TRUE(c.failure.empty()) << c.failure;
    EXPECT_LT(c.position_error, 1e-6);
    EXPECT_LT(c.psi_error, 1e-3);
  }
}

TEST(Synthetic, PerturbationIsSeeded) {
  const ObjectParams p = fixture("ob1");
  const double phis[] = {0.0, 0.5};
  auto a = synthetic_equilibria(p, phis);
  auto b = a;
  std::mt19937_64 r1(7);
  std::mt19937_64 r2(7);
  perturb_equilibria(a, 0.01, r1);
  perturb_equilibria(b, 0.01, r2);
  EXPECT_EQ(a[1].theta_star, b[1].theta_star);
}

}  // namespace
}  // namespace dlo
