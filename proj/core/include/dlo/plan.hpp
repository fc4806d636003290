#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "dlo/model.hpp"

namespace dlo {

// --- Equilibria of the shape dynamics with a frozen base --------------------

/// r(theta) = G_theta(theta, phi) + kH(theta - theta_bar).
Vec equilibrium_residual(const Vec& theta, double phi, const ObjectParams& p);

struct EquilibriumOptions {
  double tolerance = 1e-10;  // residual norm
  int max_iterations = 100;
  double max_step = 0.5;     // cap on the Newton step norm; keeps the branch
};

struct EquilibriumResult {
  Vec theta;
  double residual = 0.0;
  int iterations = 0;
  /// Smallest eigenvalue of the residual Jacobian; non-positive means the
  /// equilibrium exists but is not a strict minimum of the potential.
  double min_eigenvalue = 0.0;
  bool stable() const { return min_eigenvalue > 0.0; }
};

/// Damped Newton iteration from theta_init. Throws ConvergenceFailure
/// (carrying the last iterate) when the residual cannot be driven below the
/// tolerance.
EquilibriumResult solve_equilibrium(double phi, const ObjectParams& p, const Vec& theta_init,
                                    const EquilibriumOptions& options = {});

struct BranchPoint {
  double phi;
  Vec theta;
};

struct ContinuationOptions {
  double max_step = std::numbers::pi / 96;  // largest phi increment between solves
  double min_step = 1e-5;                   // below this a failed step is a lost branch
  double max_jump = 0.25;                   // largest theta change per increment / max_step
  EquilibriumOptions newton{};
};

/// Tracks the stable equilibrium branch from phi = 0 outward in both
/// directions, seeding each solve with its neighbour. `phi_grid` must be
/// sorted and contain 0. Throws BranchLost when the branch folds or a solve
/// jumps away from it.
std::vector<BranchPoint> equilibrium_branch(std::span<const double> phi_grid, const ObjectParams& p,
                                            const Vec& theta_seed, const ContinuationOptions& options = {});

/// Equilibrium reached by slowly rotating the base from phi = 0 to `phi`
/// (the branch from the straight seed). When the branch is lost before
/// `phi`, the shape is released at `phi` from the last tracked state and
/// allowed to settle under its own damped dynamics, which is what a
/// physical object does at a fold.
EquilibriumResult settled_equilibrium(double phi, const ObjectParams& p);

/// Endpoint position relative to the grasped end (base at the origin).
Point2 endpoint_offset(const Vec& theta, double phi, const ObjectParams& p);
/// Tip angle in the hanging frame (0 = pointing straight down).
double tip_angle(const Vec& theta, double phi);

// --- Planning -----------------------------------------------------------------

struct TaskGoal {
  Point2 p_star = Point2::Zero();
  std::optional<double> psi_star;
  void validate() const;
};

/// Feasible base poses: an optional disk for (x, y) and an angle interval.
struct FeasibleSet {
  Point2 disk_center{0.0, 0.333};
  std::optional<double> disk_radius = 0.5;
  double phi_min = -0.75 * std::numbers::pi;
  double phi_max = 0.75 * std::numbers::pi;

  static FeasibleSet position_default();
  static FeasibleSet orientation_default();

  void validate() const;
  /// Euclidean projection onto the disk (identity when unconstrained).
  Point2 project(const Point2& point) const;
  bool contains(double x, double y, double phi, double tol = 1e-9) const;
};

struct PlanSolution {
  double x_star = 0.0;
  double y_star = 0.0;
  double phi_star = 0.0;
  Vec theta_star;
  Point2 predicted_endpoint = Point2::Zero();
  double predicted_tip_angle = 0.0;
  double cost = 0.0;
  double equilibrium_residual = 0.0;
};

struct PlannerOptions {
  int grid_samples = 721;
  double refine_tolerance = 1e-10;  // golden-section bracket width, rad
  double angle_weight = 1.0;        // weight of the tip-angle error in the stacked cost
  ContinuationOptions continuation{};
};

/// Equilibrium branch tabulated over the feasible angle range. Everything
/// the planners need depends on phi alone, so one table serves every goal.
class EquilibriumPlanner {
 public:
  EquilibriumPlanner(ObjectParams p, FeasibleSet feasible, PlannerOptions options = {});

  /// Minimizes the endpoint distance to p_star over the feasible set.
  PlanSolution plan_position(const TaskGoal& goal) const;
  /// Minimizes the stacked (position, tip angle) error; requires a feasible
  /// set without a disk.
  PlanSolution plan_orientation(const TaskGoal& goal) const;

  const ObjectParams& params() const { return params_; }
  const FeasibleSet& feasible() const { return feasible_; }
  /// Angles actually covered by the branch (a fold truncates the range).
  double phi_low() const { return grid_.front().phi; }
  double phi_high() const { return grid_.back().phi; }
  bool truncated() const { return truncated_; }

  /// Equilibrium at an arbitrary phi in range, continued from the nearest grid entry.
  Vec equilibrium_at(double phi) const;

 private:
  struct Entry {
    double phi;
    Vec theta;
    Point2 offset;
    double tip_angle;
  };

  template <typename Cost>
  PlanSolution minimize(const TaskGoal& goal, Cost cost) const;
  PlanSolution finish(double phi, const Vec& theta, const TaskGoal& goal, double cost) const;

  ObjectParams params_;
  FeasibleSet feasible_;
  PlannerOptions options_;
  std::vector<Entry> grid_;
  bool truncated_ = false;
};

PlanSolution plan_position(const TaskGoal& goal, const ObjectParams& p, const FeasibleSet& feasible,
                           const PlannerOptions& options = {});
PlanSolution plan_orientation(const TaskGoal& goal, const ObjectParams& p, const FeasibleSet& feasible,
                              const PlannerOptions& options = {});

/// Model-free reference: phi = 0 and the base placed at a constant,
/// measured offset from the goal (projected onto the disk).
PlanSolution baseline_offset_plan(const TaskGoal& goal, const Point2& measured_offset, const FeasibleSet& feasible,
                                  const ObjectParams& p);

}  // namespace dlo
