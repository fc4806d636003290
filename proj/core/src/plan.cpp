#include "dlo/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dlo/dynamics.hpp"
#include "dlo/errors.hpp"
#include "dlo/integrate.hpp"

namespace dlo {

namespace {

constexpr double kTieTolerance = 1e-12;

Mat residual_jacobian(const Vec& theta, double phi, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  return shape_gravity_jacobian(theta, phi, p).leftCols(n1) + p.stiffness * elasticity_matrix(p.degree);
}

double min_symmetric_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// d theta* / d phi along the branch.
Vec branch_tangent(const Vec& theta, double phi, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const Mat dG = shape_gravity_jacobian(theta, phi, p);
  const Mat Jr = dG.leftCols(n1) + p.stiffness * elasticity_matrix(p.degree);
  return -Jr.colPivHouseholderQr().solve(dG.col(n1));
}

struct Tracked {
  std::vector<BranchPoint> points;  // in the order of the input grid, only the tracked span
  std::optional<BranchLost> lost;
};

// Tracks the branch over `grid` (sorted, contains 0). On a fold the
// tracked span stops at the last good grid point in that direction.
Tracked track_branch(std::span<const double> grid, const ObjectParams& p, const Vec& seed,
                     const ContinuationOptions& options) {
  if (grid.empty()) throw std::invalid_argument("phi grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("phi grid must be sorted");
  const auto origin_it = std::find(grid.begin(), grid.end(), 0.0);
  if (origin_it == grid.end()) throw std::invalid_argument("phi grid must contain the continuation origin 0");
  const auto origin = static_cast<std::ptrdiff_t>(origin_it - grid.begin());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());

  const EquilibriumResult start = solve_equilibrium(0.0, p, seed, options.newton);
  std::vector<std::optional<Vec>> solved(grid.size());
  solved[origin] = start.theta;
  Tracked out;

  for (int dir : {+1, -1}) {
    double phi = 0.0;
    Vec theta = start.theta;
    double step = options.max_step;
    for (std::ptrdiff_t i = origin + dir; i >= 0 && i < count; i += dir) {
      const double target = grid[i];
      bool lost = false;
      while (phi != target) {
        const double increment = std::min(step, std::abs(target - phi));
        const double next = (std::abs(target - phi) <= increment) ? target : phi + dir * increment;
        const Vec predicted = theta + branch_tangent(theta, phi, p) * (next - phi);
        bool accepted = false;
        try {
          const EquilibriumResult r = solve_equilibrium(next, p, predicted, options.newton);
          const double allowed = options.max_jump * std::abs(next - phi) / options.max_step;
          accepted = r.stable() && (r.theta - predicted).norm() <= allowed;
          if (accepted) {
            phi = next;
            theta = r.theta;
            step = std::min(options.max_step, 2.0 * step);
          }
        } catch (const ConvergenceFailure&) {
          accepted = false;
        }
        if (!accepted) {
          step *= 0.5;
          if (step < options.min_step) {
            lost = true;
            break;
          }
        }
      }
      if (lost) {
        if (!out.lost) {
          out.lost.emplace("equilibrium branch lost past phi = " + std::to_string(phi), phi, theta);
        }
        break;
      }
      solved[i] = theta;
    }
  }

  for (std::ptrdiff_t i = 0; i < count; ++i) {
    if (solved[i]) out.points.push_back({grid[i], *solved[i]});
  }
  return out;
}

}  // namespace

Vec equilibrium_residual(const Vec& theta, double phi, const ObjectParams& p) {
  return shape_gravity(theta, phi, p) + p.stiffness * elasticity_matrix(p.degree) * (theta - p.rest_curvature);
}

EquilibriumResult solve_equilibrium(double phi, const ObjectParams& p, const Vec& theta_init,
                                    const EquilibriumOptions& options) {
  if (theta_init.size() != p.shape_dofs()) throw std::invalid_argument("theta_init must have n+1 entries");
  Vec theta = theta_init;
  Vec r = equilibrium_residual(theta, phi, p);
  double norm = r.norm();
  int iter = 0;
  for (; iter < options.max_iterations && !(norm < options.tolerance); ++iter) {
    const Mat Jr = residual_jacobian(theta, phi, p);
    Vec step = -Jr.colPivHouseholderQr().solve(r);
    if (!step.allFinite()) break;
    const double step_norm = step.norm();
    if (step_norm > options.max_step) step *= options.max_step / step_norm;

    double t = 1.0;
    Vec trial = theta + step;
    Vec r_trial = equilibrium_residual(trial, phi, p);
    while (r_trial.norm() > (1.0 - 1e-4 * t) * norm && t > 1e-10) {
      t *= 0.5;
      trial = theta + t * step;
      r_trial = equilibrium_residual(trial, phi, p);
    }
    if (r_trial.norm() >= norm) {
      // No decrease along the Newton direction; one last full step when we
      // are already at round-off level, otherwise give up.
      if (norm < 1e3 * options.tolerance) {
        theta = trial;
        r = r_trial;
        norm = r.norm();
      }
      break;
    }
    theta = trial;
    r = r_trial;
    norm = r.norm();
  }
  if (!(norm < options.tolerance)) {
    throw ConvergenceFailure("equilibrium Newton iteration did not converge at phi = " + std::to_string(phi), theta,
                             norm);
  }
  EquilibriumResult result;
  result.theta = theta;
  result.residual = norm;
  result.iterations = iter;
  result.min_eigenvalue = min_symmetric_eigenvalue(residual_jacobian(theta, phi, p));
  return result;
}

std::vector<BranchPoint> equilibrium_branch(std::span<const double> phi_grid, const ObjectParams& p,
                                            const Vec& theta_seed, const ContinuationOptions& options) {
  Tracked tracked = track_branch(phi_grid, p, theta_seed, options);
  if (tracked.lost) throw *tracked.lost;
  return std::move(tracked.points);
}

EquilibriumResult settled_equilibrium(double phi, const ObjectParams& p) {
  const Vec seed = Vec::Zero(p.shape_dofs());
  std::vector<double> grid{0.0};
  if (phi < 0.0) grid.insert(grid.begin(), phi);
  if (phi > 0.0) grid.push_back(phi);
  Tracked tracked = track_branch(grid, p, seed, {});
  if (!tracked.lost) {
    const auto& pt = (phi < 0.0) ? tracked.points.front() : tracked.points.back();
    return solve_equilibrium(phi, p, pt.theta);
  }

  // Released past a fold: let the damped shape dynamics pick the equilibrium.
  ObjectParams relax = p;
  relax.damping = std::max(p.damping, 0.05);
  const ZeroDynamicsSystem system(relax, phi);
  Vec theta = tracked.lost->last_good_theta;
  Vec thetadot = Vec::Zero(p.shape_dofs());
  StepOptions step;
  step.method = StepMethod::rk45;
  step.dt = 1e-3;
  step.sample_dt = 0.5;
  step.rel_tol = 1e-9;
  for (int chunk = 0; chunk < 60; ++chunk) {
    const Trajectory traj = integrate(system, theta, thetadot, 5.0, step);
    theta = traj.states.back().head(p.shape_dofs());
    thetadot = traj.velocities.back().head(p.shape_dofs());
    if (thetadot.norm() < 1e-6) break;
  }
  return solve_equilibrium(phi, p, theta);
}

Point2 endpoint_offset(const Vec& theta, double phi, const ObjectParams& p) {
  Vec q = Vec::Zero(p.dofs());
  q.head(p.shape_dofs()) = theta;
  q(phi_index(p)) = phi;
  return fk_point(q, p, 1.0, 0.0);
}

double tip_angle(const Vec& theta, double phi) { return alpha(1.0, theta, phi); }

// --- goal and feasible set ---------------------------------------------------------

void TaskGoal::validate() const {
  if (!p_star.allFinite()) throw std::invalid_argument("goal position must be finite");
  if (psi_star && !(std::abs(*psi_star) < std::numbers::pi)) {
    throw std::invalid_argument("goal tip angle must lie in (-pi, pi)");
  }
}

FeasibleSet FeasibleSet::position_default() { return {}; }

FeasibleSet FeasibleSet::orientation_default() {
  FeasibleSet f;
  f.disk_radius.reset();
  f.phi_min = -0.75 * std::numbers::pi;
  f.phi_max = std::numbers::pi;
  return f;
}

void FeasibleSet::validate() const {
  if (disk_radius && !(*disk_radius > 0.0)) throw EmptyFeasibleSet("feasible disk radius must be positive");
  if (!(phi_min < phi_max)) throw EmptyFeasibleSet("feasible angle interval is empty");
  if (!disk_center.allFinite()) throw std::invalid_argument("feasible disk center must be finite");
}

Point2 FeasibleSet::project(const Point2& point) const {
  if (!disk_radius) return point;
  const Point2 rel = point - disk_center;
  const double dist = rel.norm();
  if (dist <= *disk_radius) return point;
  return disk_center + rel * (*disk_radius / dist);
}

bool FeasibleSet::contains(double x, double y, double phi, double tol) const {
  if (phi < phi_min - tol || phi > phi_max + tol) return false;
  if (!disk_radius) return true;
  return (Point2(x, y) - disk_center).norm() <= *disk_radius + tol;
}

// --- planner -------------------------------------------------------------------------

EquilibriumPlanner::EquilibriumPlanner(ObjectParams p, FeasibleSet feasible, PlannerOptions options)
    : params_(std::move(p)), feasible_(std::move(feasible)), options_(options) {
  params_.validate();
  feasible_.validate();
  if (options_.grid_samples < 2) throw std::invalid_argument("planner grid needs at least two samples");

  std::vector<double> grid;
  const int count = options_.grid_samples;
  for (int i = 0; i < count; ++i) {
    grid.push_back(feasible_.phi_min + (feasible_.phi_max - feasible_.phi_min) * i / (count - 1));
  }
  // Snap samples within round-off of the origin so the continuation starts there.
  for (double& phi : grid) {
    if (std::abs(phi) < 1e-12) phi = 0.0;
  }
  if (std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
    grid.insert(std::upper_bound(grid.begin(), grid.end(), 0.0), 0.0);
  }
  const bool origin_in_range = feasible_.phi_min <= 0.0 && 0.0 <= feasible_.phi_max;
  if (!origin_in_range) {
    // continuation still starts from the hanging state; cover the gap
    const double lo = std::min(0.0, feasible_.phi_min);
    const double hi = std::max(0.0, feasible_.phi_max);
    const double spacing = (feasible_.phi_max - feasible_.phi_min) / (count - 1);
    for (double phi = lo; phi < hi; phi += spacing) grid.push_back(phi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  Tracked tracked = track_branch(grid, params_, Vec::Zero(params_.shape_dofs()), options_.continuation);
  truncated_ = tracked.lost.has_value();
  for (const auto& pt : tracked.points) {
    if (pt.phi < feasible_.phi_min || pt.phi > feasible_.phi_max) continue;
    grid_.push_back({pt.phi, pt.theta, endpoint_offset(pt.theta, pt.phi, params_), tip_angle(pt.theta, pt.phi)});
  }
  if (grid_.empty()) throw EmptyFeasibleSet("no equilibrium on the tracked branch lies in the feasible angle range");
}

Vec EquilibriumPlanner::equilibrium_at(double phi) const {
  if (phi < grid_.front().phi || phi > grid_.back().phi) {
    throw std::out_of_range("phi outside the tracked branch range");
  }
  auto hi = std::lower_bound(grid_.begin(), grid_.end(), phi, [](const Entry& e, double v) { return e.phi < v; });
  if (hi == grid_.end()) hi = std::prev(grid_.end());
  if (hi->phi == phi) return hi->theta;
  const auto lo = (hi == grid_.begin()) ? hi : std::prev(hi);
  const double w = (hi->phi == lo->phi) ? 0.0 : (phi - lo->phi) / (hi->phi - lo->phi);
  const Vec seed = (1.0 - w) * lo->theta + w * hi->theta;
  return solve_equilibrium(phi, params_, seed, options_.continuation.newton).theta;
}

template <typename Cost>
PlanSolution EquilibriumPlanner::minimize(const TaskGoal& goal, Cost cost) const {
  // Grid search with deterministic tie-breaking (smaller |phi|, then smaller phi).
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto& e = grid_[i];
    const double c = cost(e.offset, e.tip_angle);
    const bool better = c < best_cost - kTieTolerance;
    const bool tie = !better && std::abs(c - best_cost) <= kTieTolerance;
    const double cur = grid_[best].phi;
    if (better || (tie && (std::abs(e.phi) < std::abs(cur) || (std::abs(e.phi) == std::abs(cur) && e.phi < cur)))) {
      best = i;
      best_cost = std::min(c, best_cost);
      if (better) best_cost = c;
    }
  }

  double phi = grid_[best].phi;
  Vec theta = grid_[best].theta;
  if (best_cost > kTieTolerance && grid_.size() > 1) {
    double a = grid_[best == 0 ? 0 : best - 1].phi;
    double b = grid_[std::min(best + 1, grid_.size() - 1)].phi;
    auto evaluate = [&](double x, Vec& th) {
      th = equilibrium_at(x);
      return cost(endpoint_offset(th, x, params_), tip_angle(th, x));
    };
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    Vec t1;
    Vec t2;
    double f1 = evaluate(x1, t1);
    double f2 = evaluate(x2, t2);
    while (b - a > options_.refine_tolerance) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        t2 = t1;
        x1 = b - inv_phi * (b - a);
        f1 = evaluate(x1, t1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        t1 = t2;
        x2 = a + inv_phi * (b - a);
        f2 = evaluate(x2, t2);
      }
    }
    const double fbest = std::min(f1, f2);
    if (fbest < best_cost) {
      phi = (f1 <= f2) ? x1 : x2;
      theta = (f1 <= f2) ? t1 : t2;
      best_cost = fbest;
    }
  }
  return finish(phi, theta, goal, best_cost);
}

PlanSolution EquilibriumPlanner::finish(double phi, const Vec& theta, const TaskGoal& goal, double cost) const {
  PlanSolution s;
  const Point2 offset = endpoint_offset(theta, phi, params_);
  const Point2 base = feasible_.project(goal.p_star - offset);
  s.x_star = base.x();
  s.y_star = base.y();
  s.phi_star = phi;
  s.theta_star = theta;
  FloatingBaseConfig q{theta, base.x(), base.y(), phi};
  s.predicted_endpoint = fk_point(q.to_vector(), params_, 1.0, 0.0);
  s.predicted_tip_angle = tip_angle(theta, phi);
  s.cost = cost;
  s.equilibrium_residual = equilibrium_residual(theta, phi, params_).norm();
  return s;
}

PlanSolution EquilibriumPlanner::plan_position(const TaskGoal& goal) const {
  goal.validate();
  if (!feasible_.disk_radius) {
    // unconstrained position: any phi reaches the goal exactly
  }
  auto cost = [&](const Point2& offset, double) {
    const Point2 desired = goal.p_star - offset;
    return (desired - feasible_.project(desired)).norm();
  };
  PlanSolution s = minimize(goal, cost);
  s.cost = (goal.p_star - s.predicted_endpoint).norm();
  return s;
}

PlanSolution EquilibriumPlanner::plan_orientation(const TaskGoal& goal) const {
  goal.validate();
  if (!goal.psi_star) throw std::invalid_argument("orientation planning needs a tip angle goal");
  if (feasible_.disk_radius) throw std::invalid_argument("orientation planning takes a feasible set without a disk");
  const double w = options_.angle_weight;
  auto cost = [&](const Point2&, double psi) { return w * std::abs(wrap_angle(*goal.psi_star - psi)); };
  PlanSolution s = minimize(goal, cost);
  const double pos = (goal.p_star - s.predicted_endpoint).norm();
  const double ang = w * wrap_angle(*goal.psi_star - s.predicted_tip_angle);
  s.cost = std::sqrt(pos * pos + ang * ang);
  return s;
}

PlanSolution plan_position(const TaskGoal& goal, const ObjectParams& p, const FeasibleSet& feasible,
                           const PlannerOptions& options) {
  return EquilibriumPlanner(p, feasible, options).plan_position(goal);
}

PlanSolution plan_orientation(const TaskGoal& goal, const ObjectParams& p, const FeasibleSet& feasible,
                              const PlannerOptions& options) {
  return EquilibriumPlanner(p, feasible, options).plan_orientation(goal);
}

PlanSolution baseline_offset_plan(const TaskGoal& goal, const Point2& measured_offset, const FeasibleSet& feasible,
                                  const ObjectParams& p) {
  goal.validate();
  feasible.validate();
  const EquilibriumResult eq = settled_equilibrium(0.0, p);
  const Point2 base = feasible.project(goal.p_star - measured_offset);
  PlanSolution s;
  s.x_star = base.x();
  s.y_star = base.y();
  s.phi_star = 0.0;
  s.theta_star = eq.theta;
  s.predicted_endpoint = base + measured_offset;
  s.predicted_tip_angle = tip_angle(eq.theta, 0.0);
  s.cost = (goal.p_star - s.predicted_endpoint).norm();
  s.equilibrium_residual = eq.residual;
  return s;
}

}  // namespace dlo
