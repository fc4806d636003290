#include "dlo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dlo/errors.hpp"

namespace dlo {

namespace {

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> grid_axis(double lo, double hi, double spacing) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + spacing * static_cast<double>(i);
  return out;
}

Point2 plant_endpoint(const PlanSolution& plan, const ObjectParams& plant) {
  const EquilibriumResult eq = settled_equilibrium(plan.phi_star, plant);
  return Point2(plan.x_star, plan.y_star) + endpoint_offset(eq.theta, plan.phi_star, plant);
}

Point2 closed_loop_endpoint(const PlanSolution& plan, const ObjectParams& plant, const SweepOptions& o) {
  const auto [traj, report] = closed_loop_sim(plan, o.robot, plant, o.gains, o.closed_loop);
  return fk_point(traj.states.back(), plant, 1.0, 0.0);
}

}  // namespace

std::vector<double> static_protocol_angles() {
  std::vector<double> out;
  for (int i = -11; i <= 11; ++i) out.push_back(i * std::numbers::pi / 12.0);
  return out;
}

std::vector<EquilibriumSample> synthetic_equilibria(const ObjectParams& plant, std::span<const double> phis) {
  std::vector<EquilibriumSample> out;
  out.reserve(phis.size());
  for (double phi : phis) out.push_back({phi, settled_equilibrium(phi, plant).theta});
  return out;
}

void perturb_equilibria(std::vector<EquilibriumSample>& samples, double rel, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& s : samples) {
    for (Eigen::Index i = 0; i < s.theta_star.size(); ++i) s.theta_star(i) *= 1.0 + rel * normal(rng);
  }
}

Trajectory pendulum_drop(const ObjectParams& plant, const DropOptions& options) {
  const Vec theta0 = settled_equilibrium(0.0, plant).theta;
  const ZeroDynamicsSystem system(plant, options.phi);
  StepOptions step;
  step.method = StepMethod::rk45;
  step.dt = 1e-3;
  step.sample_dt = options.sample_dt;
  step.rel_tol = 1e-10;
  step.abs_tol = 1e-12;
  return integrate(system, theta0, Vec::Zero(plant.shape_dofs()), options.duration, step);
}

ShapeSeries exact_shape_series(const Trajectory& traj, const ObjectParams& plant) {
  traj.validate();
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const int n1 = plant.shape_dofs();
  ShapeSeries series;
  series.times = traj.times;
  series.phi = traj.states.front()(phi_index(plant));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec theta = traj.states[i].head(n1);
    const Vec thetadot = traj.velocities[i].head(n1);
    series.theta.push_back(theta);
    series.theta_dot.push_back(thetadot);
    series.theta_ddot.push_back(zero_dynamics_accel(theta, thetadot, series.phi, plant));
  }
  return series;
}

std::vector<io::MarkerFrame> trajectory_markers(const Trajectory& traj, const ObjectParams& p, double noise,
                                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-noise, noise);
  std::vector<io::MarkerFrame> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    MarkerSet m = markers_at(traj.states[i], p);
    if (noise > 0.0) {
      for (Point2* pt : {&m.start, &m.mid, &m.end}) *pt += Point2(u(rng), u(rng));
    }
    out.push_back({traj.times[i], m});
  }
  return out;
}

std::vector<io::MarkerFrame> equilibrium_markers(std::span<const EquilibriumSample> samples, const ObjectParams& p,
                                                 double noise, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-noise, noise);
  std::vector<io::MarkerFrame> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Vec q = Vec::Zero(p.dofs());
    q.head(p.shape_dofs()) = samples[i].theta_star;
    q(phi_index(p)) = samples[i].phi;
    MarkerSet m = markers_at(q, p);
    if (noise > 0.0) {
      for (Point2* pt : {&m.start, &m.mid, &m.end}) *pt += Point2(u(rng), u(rng));
    }
    out.push_back({static_cast<double>(i), m});
  }
  return out;
}

Vec marker_seed(const MarkerSet& m, const ObjectParams& p) {
  auto heading = [](const Point2& d) { return std::atan2(d.x(), -d.y()); };
  const double a1 = heading(m.mid - m.start);
  const double a2 = a1 + wrap_angle(heading(m.end - m.mid) - a1);
  // chord headings approximate the mean of alpha over each half
  const double theta0 = 2.0 * (a2 - a1);
  Vec q = Vec::Zero(p.dofs());
  q(0) = theta0;
  q(x_index(p)) = m.start.x();
  q(y_index(p)) = m.start.y();
  q(phi_index(p)) = wrap_angle(a1 - 0.25 * theta0);
  return q;
}

IdentificationReport identify_from_markers(std::span<const io::MarkerFrame> static_frames,
                                           std::span<const io::MarkerFrame> dynamic_frames, const ObjectParams& p,
                                           const IkOptions& ik) {
  if (static_frames.empty()) throw std::invalid_argument("static identification needs marker frames");
  const int n1 = p.shape_dofs();
  std::vector<EquilibriumSample> samples;
  for (const auto& frame : static_frames) {
    frame.markers.validate(p.length);
    const IkResult r = numerical_ik(frame.markers, marker_seed(frame.markers, p), p, ik);
    samples.push_back({wrap_angle(r.q(phi_index(p))), r.q.head(n1)});
  }
  const StaticFit fit = identify_static(samples, p);

  IdentificationReport report;
  report.k = fit.k;
  report.theta_bar = fit.theta_bar;
  report.residual_static = fit.residual;
  report.n_samples = static_frames.size();
  if (dynamic_frames.empty()) return report;

  if (dynamic_frames.size() < 7) throw std::invalid_argument("dynamic identification needs at least 7 frames");
  ShapeSeries series;
  std::vector<Vec> base;
  Vec q = marker_seed(dynamic_frames.front().markers, p);
  for (const auto& frame : dynamic_frames) {
    frame.markers.validate(p.length);
    try {
      q = numerical_ik(frame.markers, q, p, ik).q;
    } catch (const ConvergenceFailure&) {
      q = numerical_ik(frame.markers, marker_seed(frame.markers, p), p, ik).q;
    }
    series.times.push_back(frame.t);
    series.theta.push_back(q.head(n1));
    base.push_back(q.tail<3>());
  }
  Vec mean_base = Vec::Zero(3);
  for (const Vec& b : base) mean_base += b / static_cast<double>(base.size());
  for (const Vec& b : base) {
    if ((b.head<2>() - mean_base.head<2>()).norm() > 0.01 || std::abs(b(2) - mean_base(2)) > 0.05) {
      throw std::invalid_argument("dynamic identification requires a fixed-base recording; the base moves");
    }
  }
  series.phi = mean_base(2);
  auto [thd, thdd] = differentiate_trajectory(series.times, series.theta);
  series.theta_dot = std::move(thd);
  series.theta_ddot = std::move(thdd);

  ObjectParams identified = p;
  identified.stiffness = fit.k;
  identified.rest_curvature = fit.theta_bar;
  const DampingFit damping = identify_damping(series, identified);
  report.beta = damping.beta;
  report.residual_dynamic = damping.residual;
  report.n_samples += dynamic_frames.size();
  return report;
}

// --- sweeps ----------------------------------------------------------------------------

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw std::invalid_argument("grid bounds must be finite");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("grid spacing must be positive");
  if (x_min > x_max || y_min > y_max) throw std::invalid_argument("grid bounds are reversed");
}

std::vector<double> GridSpec::xs() const { return grid_axis(x_min, x_max, spacing); }
std::vector<double> GridSpec::ys() const { return grid_axis(y_min, y_max, spacing); }

double SweepResult::reduction() const { return baseline_mean > 0.0 ? 1.0 - model_mean / baseline_mean : 0.0; }

SweepResult workspace_sweep(const ObjectParams& model, const ObjectParams& plant, const GridSpec& grid,
                            const SweepOptions& options) {
  grid.validate();
  model.validate();
  plant.validate();
  const EquilibriumPlanner planner(model, options.feasible, options.planner);
  const Vec hanging = settled_equilibrium(0.0, plant).theta;
  const Point2 measured_offset = endpoint_offset(hanging, 0.0, plant);

  SweepResult result;
  result.grid = grid;
  for (double y : grid.ys()) {
    for (double x : grid.xs()) {
      SweepCell cell;
      cell.goal = Point2(x, y);
      result.cells.push_back(cell);
    }
  }

  parallel_for(result.cells.size(), options.jobs, [&](std::size_t i) {
    SweepCell& cell = result.cells[i];
    try {
      const TaskGoal goal{cell.goal, std::nullopt};
      cell.model = planner.plan_position(goal);
      cell.baseline = baseline_offset_plan(goal, measured_offset, options.feasible, model);
      if (options.evaluation == PlantEvaluation::equilibrium) {
        cell.model_endpoint = plant_endpoint(cell.model, plant);
        cell.baseline_endpoint = plant_endpoint(cell.baseline, plant);
      } else {
        cell.model_endpoint = closed_loop_endpoint(cell.model, plant, options);
        cell.baseline_endpoint = closed_loop_endpoint(cell.baseline, plant, options);
      }
      cell.model_error = (cell.model_endpoint - cell.goal).norm();
      cell.baseline_error = (cell.baseline_endpoint - cell.goal).norm();
    } catch (const std::exception& e) {
      cell.failure = e.what();
    }
  });

  double model_sum = 0.0;
  double baseline_sum = 0.0;
  for (const auto& cell : result.cells) {
    if (!cell.failure.empty()) continue;
    model_sum += cell.model_error;
    baseline_sum += cell.baseline_error;
    ++result.evaluated;
  }
  if (result.evaluated > 0) {
    result.model_mean = model_sum / static_cast<double>(result.evaluated);
    result.baseline_mean = baseline_sum / static_cast<double>(result.evaluated);
  }
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  const auto n1 = result.cells.empty() || result.cells.front().model.theta_star.size() == 0
                      ? 2
                      : result.cells.front().model.theta_star.size();
  os << "gx,gy,x*,y*,phi*";
  for (Eigen::Index i = 0; i < n1; ++i) os << ",theta" << i << '*';
  os << ",pred_ex,pred_ey,cost\n";
  for (const auto& cell : result.cells) {
    os << io::format_number(cell.goal.x()) << ',' << io::format_number(cell.goal.y());
    if (!cell.failure.empty()) {
      for (Eigen::Index i = 0; i < n1 + 6; ++i) os << ",nan";
      os << '\n';
      continue;
    }
    const PlanSolution& s = cell.model;
    os << ',' << io::format_number(s.x_star) << ',' << io::format_number(s.y_star) << ','
       << io::format_number(s.phi_star);
    for (double v : s.theta_star) os << ',' << io::format_number(v);
    os << ',' << io::format_number(s.predicted_endpoint.x()) << ',' << io::format_number(s.predicted_endpoint.y())
       << ',' << io::format_number(s.cost) << '\n';
  }
}

std::vector<double> orientation_goals(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("orientation goal step must be positive");
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor(std::numbers::pi / step + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(-0.5 * std::numbers::pi + i * step);
  return out;
}

std::vector<OrientationCell> orientation_sweep(const ObjectParams& model, const ObjectParams& plant,
                                               const Point2& p_star, std::span<const double> psi_goals,
                                               const PlannerOptions& options, int jobs) {
  model.validate();
  plant.validate();
  const EquilibriumPlanner planner(model, FeasibleSet::orientation_default(), options);
  std::vector<OrientationCell> cells(psi_goals.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    OrientationCell& cell = cells[i];
    cell.psi_goal = psi_goals[i];
    try {
      cell.plan = planner.plan_orientation({p_star, psi_goals[i]});
      const EquilibriumResult eq = settled_equilibrium(cell.plan.phi_star, plant);
      cell.achieved_endpoint =
          Point2(cell.plan.x_star, cell.plan.y_star) + endpoint_offset(eq.theta, cell.plan.phi_star, plant);
      cell.achieved_psi = wrap_angle(tip_angle(eq.theta, cell.plan.phi_star));
      cell.position_error = (cell.achieved_endpoint - p_star).norm();
      cell.psi_error = std::abs(wrap_angle(cell.achieved_psi - cell.psi_goal));
    } catch (const std::exception& e) {
      cell.failure = e.what();
    }
  });
  return cells;
}

void write_orientation_csv(std::ostream& os, std::span<const OrientationCell> cells) {
  os << "psi_goal,x*,y*,phi*,pred_ex,pred_ey,pred_psi,ach_ex,ach_ey,ach_psi,pos_err,psi_err\n";
  for (const auto& c : cells) {
    os << io::format_number(c.psi_goal);
    if (!c.failure.empty()) {
      os << ",nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    const double values[] = {c.plan.x_star,
                             c.plan.y_star,
                             c.plan.phi_star,
                             c.plan.predicted_endpoint.x(),
                             c.plan.predicted_endpoint.y(),
                             wrap_angle(c.plan.predicted_tip_angle),
                             c.achieved_endpoint.x(),
                             c.achieved_endpoint.y(),
                             c.achieved_psi,
                             c.position_error,
                             c.psi_error};
    for (double v : values) os << ',' << io::format_number(v);
    os << '\n';
  }
}

}  // namespace dlo
