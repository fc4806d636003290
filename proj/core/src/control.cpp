#include "dlo/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dlo/errors.hpp"

namespace dlo {

namespace {

bool symmetric_positive_definite(const Eigen::Matrix3d& m) {
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > 0.0;
}

double nearest_branch(double angle, double reference) {
  return reference + wrap_angle(angle - reference);
}

Pose2 pose_error(const Pose2& target, const JointVector& q_r, const RobotModel& robot) {
  Pose2 e = target - end_effector_pose(q_r, robot);
  e(2) = wrap_angle(e(2));
  return e;
}

}  // namespace

void Gains::validate() const {
  if (!symmetric_positive_definite(K_P)) throw std::invalid_argument("K_P must be symmetric positive definite");
  if (!symmetric_positive_definite(K_D)) throw std::invalid_argument("K_D must be symmetric positive definite");
}

Pose2 robot_fk(const JointVector& q_r, const RobotModel& robot) {
  Pose2 pose = end_effector_pose(q_r, robot);
  pose(2) = wrap_angle(pose(2));
  return pose;
}

JointVector robot_ik(const Pose2& pose, const RobotModel& robot, const JointVector& q_init,
                     const RobotIkOptions& options) {
  robot.validate();
  if (!pose.allFinite() || !q_init.allFinite()) throw std::invalid_argument("pose and initial joints must be finite");
  const auto& l = robot.link_lengths;
  const Point2 link3(std::sin(pose(2)), -std::cos(pose(2)));
  const Point2 wrist = pose.head<2>() - l[2] * link3 - robot.base_position;
  const double r = wrist.norm();
  const double tol = 1e-12;
  if (r > l[0] + l[1] + tol || r < std::abs(l[0] - l[1]) - tol) {
    throw UnreachablePose("pose is outside the reachable annulus of the arm");
  }

  // Closed-form two-link solution for both elbows, then the nearer one.
  const double c2 = std::clamp((r * r - l[0] * l[0] - l[1] * l[1]) / (2.0 * l[0] * l[1]), -1.0, 1.0);
  const double gamma = std::atan2(wrist.x(), -wrist.y());
  JointVector best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    const double q2 = sign * std::acos(c2);
    const double q1 = gamma - std::atan2(l[1] * std::sin(q2), l[0] + l[1] * std::cos(q2));
    JointVector q(q1, q2, pose(2) - q1 - q2);
    for (int i = 0; i < 3; ++i) q(i) = nearest_branch(q(i), q_init(i));
    const double distance = (q - q_init).norm();
    if (distance < best_distance) {
      best_distance = distance;
      best = q;
    }
  }

  // Damped least-squares polish.
  JointVector q = best;
  const double lambda2 = options.damping * options.damping;
  for (int i = 0; i < options.max_iterations; ++i) {
    const Pose2 e = pose_error(pose, q, robot);
    if (e.norm() < options.tolerance) return q;
    const Eigen::Matrix3d J = end_effector_jacobian(q, robot);
    q += J.transpose() * (J * J.transpose() + lambda2 * Eigen::Matrix3d::Identity()).ldlt().solve(e);
  }
  const double residual = pose_error(pose, q, robot).norm();
  if (residual < options.tolerance) return q;
  throw ConvergenceFailure("robot IK did not converge", q, residual);
}

JointVector joint_gravity(const JointVector& q_r, const Vec& theta, const RobotModel& robot, const ObjectParams& p,
                          bool include_object) {
  if (!include_object) return arm_gravity(q_r, robot, p.gravity);
  Vec qc(3 + p.shape_dofs());
  qc << q_r, theta;
  return coupled_gravity(qc, robot, p).head<3>();
}

JointVector low_level_torque(const JointVector& q_r, const JointVector& q_r_dot, const JointVector& q_r_star,
                             const Vec& theta, const Gains& gains, const RobotModel& robot, const ObjectParams& p,
                             bool compensate_object) {
  return gains.K_P * (q_r_star - q_r) - gains.K_D * q_r_dot +
         joint_gravity(q_r_star, theta, robot, p, compensate_object);
}

ClosedLoopState hanging_start(const Point2& base, const RobotModel& robot, const ObjectParams& p,
                              const JointVector& q_init) {
  ClosedLoopState s;
  s.q_r = robot_ik(Pose2(base.x(), base.y(), 0.0), robot, q_init);
  s.theta = settled_equilibrium(end_effector_pose(s.q_r, robot)(2), p).theta;
  s.theta_dot = Vec::Zero(p.shape_dofs());
  return s;
}

std::pair<Trajectory, ClosedLoopReport> closed_loop_sim(const PlanSolution& plan, const RobotModel& robot,
                                                         const ObjectParams& p, const Gains& gains,
                                                         const ClosedLoopOptions& options) {
  gains.validate();
  robot.validate();
  p.validate();
  if (!(options.horizon > 0.0)) throw std::invalid_argument("closed-loop horizon must be positive");
  if (!(options.settle_tolerance > 0.0) || options.settle_dwell < 0.0) {
    throw std::invalid_argument("settling thresholds must be positive");
  }
  const int n1 = p.shape_dofs();

  const JointVector seed = options.initial ? options.initial->q_r : JointVector(0.0, 0.5, 0.0);
  const JointVector q_star = robot_ik(Pose2(plan.x_star, plan.y_star, plan.phi_star), robot, seed);
  const ClosedLoopState start =
      options.initial ? *options.initial : hanging_start(Point2(plan.x_star, plan.y_star), robot, p, q_star);
  if (start.theta.size() != n1 || start.theta_dot.size() != n1) {
    throw std::invalid_argument("initial shape has the wrong dimension");
  }

  const bool compensate = options.compensate_object;
  const CoupledSystem system(robot, p, [&](double, const Vec& qc, const Vec& qcdot) -> Eigen::Vector3d {
    return low_level_torque(qc.head<3>(), qcdot.head<3>(), q_star, qc.tail(n1), gains, robot, p, compensate);
  });
  Vec qc0(3 + n1);
  Vec qcdot0(3 + n1);
  qc0 << start.q_r, start.theta;
  qcdot0 << start.q_r_dot, start.theta_dot;
  Trajectory traj = integrate(system, qc0, qcdot0, options.horizon, options.step);

  ClosedLoopReport report;
  report.q_r_star = q_star;
  std::optional<double> calm_since;
  double last_rise = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double joint_error = (q_star - traj.joints[i]).norm();
    const double speed = std::sqrt(traj.joint_rates[i].squaredNorm() + traj.velocities[i].head(n1).squaredNorm());
    if (joint_error < options.settle_tolerance && speed < options.settle_tolerance) {
      if (!calm_since) calm_since = traj.times[i];
    } else {
      calm_since.reset();
    }
    if (i > 0) {
      const double storage = traj.energies[i].total() - traj.work_in[i];
      const double previous = traj.energies[i - 1].total() - traj.work_in[i - 1];
      if (storage > previous + 1e-7) last_rise = traj.times[i];
    }
  }
  const double t_end = traj.times.back();
  report.settled = calm_since.has_value() && t_end - *calm_since >= options.settle_dwell;
  report.settle_time = report.settled ? *calm_since : options.horizon;
  report.final_joint_error = (q_star - traj.joints.back()).norm();
  report.final_endpoint_error = (fk_point(traj.states.back(), p, 1.0, 0.0) - plan.predicted_endpoint).norm();
  report.energy_monotone_after = last_rise;
  return {std::move(traj), report};
}

}  // namespace dlo
