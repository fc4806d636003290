#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dlo/model.hpp"
#include "dlo/robot.hpp"

namespace dlo {

using Wrench = Eigen::Vector3d;  // (F_x, F_y, tau_phi) applied at the grasped end

/// All terms of the floating-base equations of motion at one state:
///   B qdd + C qd + G + K_force + D_force = (0, F_x, F_y, tau_phi).
struct DynamicsTerms {
  Mat B;
  Mat C;
  Vec Cqdot;
  Vec G;
  Vec K_force;
  Vec D_force;
};

struct Energies {
  double kinetic = 0.0;
  double gravitational = 0.0;
  double elastic = 0.0;
  double total() const { return kinetic + gravitational + elastic; }
};

// --- Floating-base object ---------------------------------------------------

/// B(q) = sum over the lumped masses of m J^T J.
Mat mass_matrix(const Vec& q, const ObjectParams& p);

/// dB/dq_k for every coordinate, by central differences (B does not depend
/// on x, y; those slices are exactly zero).
std::vector<Mat> mass_matrix_gradient(const Vec& q, const ObjectParams& p);

/// Coriolis matrix from Christoffel symbols of the first kind.
Mat christoffel_coriolis(const std::vector<Mat>& dB, const Vec& qdot);

/// g * sum m y over the lumped masses.
double gravity_potential(const Vec& q, const ObjectParams& p);
Vec gravity_force(const Vec& q, const ObjectParams& p);

double elastic_potential(const Vec& theta, const ObjectParams& p);

DynamicsTerms assemble(const Vec& q, const Vec& qdot, const ObjectParams& p);

Energies energies(const Vec& q, const Vec& qdot, const ObjectParams& p);

/// C(q, qdot) qdot evaluated as sum m J^T (dJ/dt) qdot, without forming C.
Vec coriolis_force(const Vec& q, const Vec& qdot, const ObjectParams& p);

/// Accelerations of the floating-base model under a wrench at the base.
/// Throws SingularInertia when B cannot be factorized.
Vec floating_base_accel(const Vec& q, const Vec& qdot, const Wrench& wrench, const ObjectParams& p);

/// Last three rows of the left-hand side of the floating-base equations.
Wrench base_wrench(const Vec& q, const Vec& qdot, const Vec& qddot, const ObjectParams& p);

/// The wrench that keeps the base at zero acceleration given (q, qdot).
Wrench clamping_wrench(const Vec& q, const Vec& qdot, const ObjectParams& p);

// --- Shape (zero-dynamics) block --------------------------------------------

/// B_theta_theta; independent of the base pose.
Mat shape_mass_matrix(const Vec& theta, const ObjectParams& p);

/// G_theta(theta, phi); independent of the base position.
Vec shape_gravity(const Vec& theta, double phi, const ObjectParams& p);

/// d G_theta / d (theta, phi), an (n+1) x (n+2) matrix; the leading square
/// block is symmetric (Hessian of the gravitational potential).
Mat shape_gravity_jacobian(const Vec& theta, double phi, const ObjectParams& p);

/// Theta accelerations with the base frozen at orientation phi_star.
Vec zero_dynamics_accel(const Vec& theta, const Vec& thetadot, double phi_star, const ObjectParams& p);

/// C_theta_theta(theta, thetadot) * thetadot.
Vec shape_coriolis_force(const Vec& theta, const Vec& thetadot, const ObjectParams& p);

// --- Robot-object coupled model ---------------------------------------------

/// Configuration layout (q_r, theta), dimension 3 + n + 1.
struct CoupledTerms {
  Mat B;
  Mat C;
  Vec Cqdot;
  Vec G;
  Vec K_force;   // kH(theta - theta_bar) on theta rows
  Vec D_force;   // joint damping on robot rows, beta H thetadot on theta rows
};

/// Maps (q_r, theta) to the floating-base vector through the robot's
/// end-effector kinematics.
Vec object_config(const Vec& q_r, const Vec& theta, const RobotModel& robot, const ObjectParams& p);

Mat coupled_mass_matrix(const Vec& qc, const RobotModel& robot, const ObjectParams& p);
Vec coupled_gravity(const Vec& qc, const RobotModel& robot, const ObjectParams& p);
Vec coupled_coriolis_force(const Vec& qc, const Vec& qcdot, const RobotModel& robot, const ObjectParams& p);
double coupled_gravity_potential(const Vec& qc, const RobotModel& robot, const ObjectParams& p);

CoupledTerms coupled_assemble(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                              const ObjectParams& p);

Energies coupled_energies(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                          const ObjectParams& p);

/// Accelerations (q_r_ddot, theta_ddot) under joint torques. A massless
/// object has no shape inertia; its theta accelerations are then reported
/// as zero and the robot block is the standalone arm.
Vec coupled_accel(const Vec& q_r, const Vec& theta, const Vec& q_r_dot, const Vec& theta_dot,
                  const Eigen::Vector3d& tau, const RobotModel& robot, const ObjectParams& p);

/// Joint torques that hold the robot at zero acceleration.
Eigen::Vector3d holding_torque(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                               const ObjectParams& p);

}  // namespace dlo
