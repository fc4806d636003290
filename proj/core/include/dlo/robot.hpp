#pragma once

#include <array>

#include <Eigen/Dense>

#include "dlo/model.hpp"

namespace dlo {

/// Planar 3R arm holding the object at its end effector.
///
/// Links are uniform rods. At q_r = 0 every link hangs along -y, so the
/// last link continues the object's tangent at the grasp; joint angles are
/// counter-clockwise and the end-effector orientation is their sum.
struct RobotModel {
  std::array<double, 3> link_lengths{0.25, 0.15, 0.10};  // m
  std::array<double, 3> link_masses{3.0, 2.0, 1.0};      // kg
  Point2 base_position{0.0, 0.333};
  std::array<double, 3> joint_damping{0.0, 0.0, 0.0};

  double reach() const { return link_lengths[0] + link_lengths[1] + link_lengths[2]; }
  void validate() const;
};

using JointVector = Eigen::Vector3d;
using Pose2 = Eigen::Vector3d;  // (x, y, phi)

/// End-effector pose; phi is the raw joint-angle sum (not wrapped).
Pose2 end_effector_pose(const JointVector& q_r, const RobotModel& robot);

/// d(x, y, phi) / d q_r.
Eigen::Matrix3d end_effector_jacobian(const JointVector& q_r, const RobotModel& robot);

/// (dJ/dt) q_r_dot of the end-effector Jacobian, the velocity-product part
/// of the end-effector acceleration.
Pose2 end_effector_velocity_product(const JointVector& q_r, const JointVector& q_r_dot, const RobotModel& robot);

/// Arm-only inertia, gravity and potential (object excluded).
Eigen::Matrix3d arm_mass_matrix(const JointVector& q_r, const RobotModel& robot);
JointVector arm_gravity(const JointVector& q_r, const RobotModel& robot, double gravity);
double arm_potential(const JointVector& q_r, const RobotModel& robot, double gravity);

/// Arm-only forward dynamics, the reference the coupled model reduces to
/// for a massless object.
JointVector arm_accel(const JointVector& q_r, const JointVector& q_r_dot, const JointVector& tau,
                      const RobotModel& robot, double gravity);

}  // namespace dlo
