#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlo/errors.hpp"
#include "dlo/plan.hpp"
#include "frozen_values.hpp"
#include "test_support.hpp"

namespace dlo {
namespace {

using test::fixture;

TEST(Equilibrium, MatchesFrozenValues) {
  const ObjectParams ob1 = fixture("ob1");
  const ObjectParams ob4 = fixture("ob4");
  const Vec e1 = settled_equilibrium(0.0, ob1).theta;
  EXPECT_NEAR(e1(0), frozen::kOb1EquilibriumPhi0[0], 1e-9);
  EXPECT_NEAR(e1(1), frozen::kOb1EquilibriumPhi0[1], 1e-9);
  const Vec e2 = settled_equilibrium(std::numbers::pi / 4, ob1).theta;
  EXPECT_NEAR(e2(0), frozen::kOb1EquilibriumPhiQuarter[0], 1e-9);
  EXPECT_NEAR(e2(1), frozen::kOb1EquilibriumPhiQuarter[1], 1e-9);
  const Vec e3 = settled_equilibrium(0.0, ob4).theta;
  EXPECT_NEAR(e3(0), frozen::kOb4EquilibriumPhi0[0], 1e-9);
  EXPECT_NEAR(e3(1), frozen::kOb4EquilibriumPhi0[1], 1e-9);
  const Vec e4 = settled_equilibrium(std::numbers::pi / 4, ob4).theta;
  EXPECT_NEAR(e4(0), frozen::kOb4EquilibriumPhiQuarter[0], 1e-9);
  EXPECT_NEAR(e4(1), frozen::kOb4EquilibriumPhiQuarter[1], 1e-9);
}

TEST(Equilibrium, NewtonSolutionIsStable) {
  for (const auto& name : test::object_names()) {
    const ObjectParams p = fixture(name);
    const EquilibriumResult r = solve_equilibrium(0.3, p, p.rest_curvature);
    EXPECT_LT(equilibrium_residual(r.theta, 0.3, p).norm(), 1e-10) << name;
    EXPECT_TRUE(r.stable()) << name;
  }
}

TEST(Equilibrium, BranchIsContinuousOverProtocolAngles) {
  for (const auto& name : test::object_names()) {
    const ObjectParams p = fixture(name);
    const Vec hanging = settled_equilibrium(0.0, p).theta;
    std::vector<double> coarse;
    std::vector<double> fine;
    for (int i = -11; i <= 11; ++i) coarse.push_back(i * std::numbers::pi / 12);
    for (int i = -22; i <= 22; ++i) fine.push_back(i * std::numbers::pi / 24);
    const auto a = equilibrium_branch(coarse, p, hanging);
    const auto b = equilibrium_branch(fine, p, hanging);
    ASSERT_EQ(a.size(), coarse.size());
    ASSERT_EQ(b.size(), fine.size());
    double largest_step = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      largest_step = std::max(largest_step, (a[i + 1].theta - a[i].theta).norm());
    }
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      // same branch on both grids, and the midpoint stays close to the chord
      EXPECT_LT((a[i].theta - b[2 * i].theta).norm(), 1e-8) << name;
      const Vec chord = 0.5 * (a[i].theta + a[i + 1].theta);
      EXPECT_LT((b[2 * i + 1].theta - chord).norm(), 0.25 * largest_step) << name << " at " << b[2 * i + 1].phi;
    }
  }
}

TEST(Equilibrium, UnsortedGridIsRejected) {
  const ObjectParams p = fixture("ob1");
  const double grid[] = {0.0, 0.5, 0.2};
  EXPECT_THROW(equilibrium_branch(grid, p, p.rest_curvature), std::invalid_argument);
}

TEST(FeasibleSet, ProjectionAndValidation) {
  FeasibleSet f = FeasibleSet::position_default();
  EXPECT_TRUE(f.contains(0.0, 0.333, 0.0));
  const Point2 far = f.project(Point2(0.0, 2.0));
  EXPECT_NEAR((far - f.disk_center).norm(), 0.5, 1e-12);
  f.phi_min = 1.0;
  f.phi_max = 0.0;
  EXPECT_THROW(f.validate(), EmptyFeasibleSet);
  f = FeasibleSet::position_default();
  f.disk_radius = -1.0;
  EXPECT_THROW(f.validate(), std::invalid_argument);
}

TEST(Planner, StraightDownGoalsUseZeroAngle) {
  for (const auto& name : test::object_names()) {
    const ObjectParams p = fixture(name);
    const EquilibriumPlanner planner(p, FeasibleSet::position_default());
    const Point2 offset = endpoint_offset(settled_equilibrium(0.0, p).theta, 0.0, p);
    // goal directly below a base inside the disk
    const Point2 goal = Point2(0.05, 0.3) + offset;
    const PlanSolution s = planner.plan_position({goal, std::nullopt});
    EXPECT_EQ(s.phi_star, 0.0) << name;
    EXPECT_LT(s.cost, 1e-6) << name;
    EXPECT_LT((s.predicted_endpoint - goal).norm(), 1e-6) << name;
  }
}

TEST(Planner, GridRefinementConverges) {
  const ObjectParams p = fixture("ob3");
  PlannerOptions coarse;
  coarse.grid_samples = 181;
  PlannerOptions fine;
  fine.grid_samples = 2881;
  const TaskGoal goal{Point2(0.6, 0.1), std::nullopt};
  const PlanSolution a = plan_position(goal, p, FeasibleSet::position_default(), coarse);
  const PlanSolution b = plan_position(goal, p, FeasibleSet::position_default(), fine);
  EXPECT_LT((a.predicted_endpoint - b.predicted_endpoint).norm(), 1e-4);
  EXPECT_NEAR(a.cost, b.cost, 1e-4);
}

TEST(Planner, SolutionSatisfiesEquilibriumAndFeasibility) {
  const ObjectParams p = fixture("ob2");
  const FeasibleSet f = FeasibleSet::position_default();
  const EquilibriumPlanner planner(p, f);
  for (const Point2& goal : {Point2(-0.4, 0.2), Point2(0.3, 0.7), Point2(0.0, -0.5)}) {
    const PlanSolution s = planner.plan_position({goal, std::nullopt});
    EXPECT_TRUE(f.contains(s.x_star, s.y_star, s.phi_star));
    EXPECT_LT(equilibrium_residual(s.theta_star, s.phi_star, p).norm(), 1e-9);
    Vec q(p.dofs());
    q << s.theta_star, s.x_star, s.y_star, s.phi_star;
    EXPECT_LT((fk_point(q, p, 1.0, 0.0) - s.predicted_endpoint).norm(), 1e-12);
    EXPECT_NEAR(s.cost, (s.predicted_endpoint - goal).norm(), 1e-12);
  }
}

TEST(Planner, CostIsTranslationInvariant) {
  const ObjectParams p = fixture("ob1");
  FeasibleSet f = FeasibleSet::position_default();
  const Point2 goal(0.45, 0.2);
  const PlanSolution a = plan_position({goal, std::nullopt}, p, f);
  const Point2 shift(1.3, -0.7);
  f.disk_center += shift;
  const PlanSolution b = plan_position({goal + shift, std::nullopt}, p, f);
  EXPECT_NEAR(a.cost, b.cost, 1e-9);
  EXPECT_NEAR(a.phi_star, b.phi_star, 1e-6);
}

TEST(Planner, OrientationGoalIsPositionExact) {
  const ObjectParams p = fixture("ob4");
  const TaskGoal goal{Point2(0.0, 0.4), 0.5236};
  const PlanSolution s = plan_orientation(goal, p, FeasibleSet::orientation_default());
  EXPECT_LT((s.predicted_endpoint - goal.p_star).norm(), 1e-6);
  EXPECT_NEAR(s.predicted_tip_angle, 0.5236, 1e-6);
  EXPECT_THROW(plan_orientation(goal, p, FeasibleSet::position_default()), std::invalid_argument);
}

TEST(Planner, BaselineHoldsTheMeasuredOffset) {
  const ObjectParams p = fixture("ob1");
  const FeasibleSet f = FeasibleSet::position_default();
  const Point2 offset = endpoint_offset(settled_equilibrium(0.0, p).theta, 0.0, p);
  const PlanSolution s = baseline_offset_plan({Point2(0.1, 0.0), std::nullopt}, offset, f, p);
  EXPECT_EQ(s.phi_star, 0.0);
  EXPECT_LT((Point2(s.x_star, s.y_star) - (Point2(0.1, 0.0) - offset)).norm(), 1e-12);
}

TEST(Planner, InvalidGoalIsRejected) {
  const ObjectParams p = fixture("ob1");
  const TaskGoal goal{Point2(std::nan(""), 0.0), std::nullopt};
  EXPECT_THROW(plan_position(goal, p, FeasibleSet::position_default()), std::invalid_argument);
}

}  // namespace
}  // namespace dlo
