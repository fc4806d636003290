#pragma once

#include <optional>
#include <utility>

#include "dlo/integrate.hpp"
#include "dlo/plan.hpp"
#include "dlo/robot.hpp"

namespace dlo {

struct Gains {
  Eigen::Matrix3d K_P = 100.0 * Eigen::Matrix3d::Identity();
  Eigen::Matrix3d K_D = 20.0 * Eigen::Matrix3d::Identity();

  /// Throws std::invalid_argument unless both are symmetric positive definite.
  void validate() const;
};

/// End-effector pose with phi wrapped to [-pi, pi).
Pose2 robot_fk(const JointVector& q_r, const RobotModel& robot);

struct RobotIkOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
  double damping = 1e-9;
};

/// Joint angles reaching `pose`, on the elbow branch nearest `q_init`.
/// Throws UnreachablePose when the wrist lies outside the arm's annulus.
JointVector robot_ik(const Pose2& pose, const RobotModel& robot, const JointVector& q_init,
                     const RobotIkOptions& options = {});

/// Gravity torque on the joints at (q_r, theta). With `include_object`
/// false the arm alone.
JointVector joint_gravity(const JointVector& q_r, const Vec& theta, const RobotModel& robot, const ObjectParams& p,
                          bool include_object = true);

/// tau = K_P (q_r* - q_r) - K_D q_r_dot + G_r(q_r*, theta).
JointVector low_level_torque(const JointVector& q_r, const JointVector& q_r_dot, const JointVector& q_r_star,
                             const Vec& theta, const Gains& gains, const RobotModel& robot, const ObjectParams& p,
                             bool compensate_object = true);

struct ClosedLoopState {
  JointVector q_r = JointVector::Zero();
  Vec theta;
  JointVector q_r_dot = JointVector::Zero();
  Vec theta_dot;
};

/// Robot at the joint configuration reaching (x, y, phi = 0), object at
/// rest on its hanging equilibrium.
ClosedLoopState hanging_start(const Point2& base, const RobotModel& robot, const ObjectParams& p,
                              const JointVector& q_init = JointVector(0.0, 0.5, 0.0));

struct ClosedLoopOptions {
  double horizon = 20.0;
  double settle_tolerance = 1e-3;
  double settle_dwell = 0.5;
  bool compensate_object = true;
  StepOptions step{StepMethod::rk4, 1e-4, 1e-2};
  std::optional<ClosedLoopState> initial;  // hanging start at the plan position when absent
};

struct ClosedLoopReport {
  bool settled = false;
  double settle_time = 0.0;
  double final_joint_error = 0.0;
  double final_endpoint_error = 0.0;
  double energy_monotone_after = 0.0;
  JointVector q_r_star = JointVector::Zero();
};

/// Simulates the robot-object system under the regulator toward the joint
/// target resolving the plan's base pose.
std::pair<Trajectory, ClosedLoopReport> closed_loop_sim(const PlanSolution& plan, const RobotModel& robot,
                                                         const ObjectParams& p, const Gains& gains = {},
                                                         const ClosedLoopOptions& options = {});

}  // namespace dlo
