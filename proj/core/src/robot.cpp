#include "dlo/robot.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dlo/errors.hpp"

namespace dlo {

namespace {

Point2 link_direction(double angle) { return {std::sin(angle), -std::cos(angle)}; }

Point2 perp(const Point2& v) { return {-v.y(), v.x()}; }

struct ArmGeometry {
  std::array<Point2, 4> joints;  // joints[3] is the end effector
  std::array<Point2, 3> centers;
  std::array<double, 3> angles;
};

ArmGeometry arm_geometry(const JointVector& q_r, const RobotModel& robot) {
  ArmGeometry g;
  g.joints[0] = robot.base_position;
  double angle = 0.0;
  for (int i = 0; i < 3; ++i) {
    angle += q_r(i);
    g.angles[i] = angle;
    const Point2 u = link_direction(angle);
    g.centers[i] = g.joints[i] + 0.5 * robot.link_lengths[i] * u;
    g.joints[i + 1] = g.joints[i] + robot.link_lengths[i] * u;
  }
  return g;
}

Eigen::Matrix3d arm_coriolis(const JointVector& q_r, const JointVector& q_r_dot, const RobotModel& robot) {
  std::array<Eigen::Matrix3d, 3> dB;
  for (int k = 0; k < 3; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(q_r(k)));
    JointVector qp = q_r;
    JointVector qm = q_r;
    qp(k) += h;
    qm(k) -= h;
    dB[k] = (arm_mass_matrix(qp, robot) - arm_mass_matrix(qm, robot)) / (2.0 * h);
  }
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        C(i, j) += 0.5 * (dB[k](i, j) + dB[j](i, k) - dB[i](j, k)) * q_r_dot(k);
      }
    }
  }
  return C;
}

}  // namespace

void RobotModel::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(link_lengths[i] > 0.0)) throw std::invalid_argument("RobotModel: link lengths must be positive");
    if (!(link_masses[i] > 0.0)) throw std::invalid_argument("RobotModel: link masses must be positive");
    if (!(joint_damping[i] >= 0.0)) throw std::invalid_argument("RobotModel: joint damping must be non-negative");
  }
  if (!base_position.allFinite()) throw std::invalid_argument("RobotModel: base position must be finite");
}

Pose2 end_effector_pose(const JointVector& q_r, const RobotModel& robot) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  return {g.joints[3].x(), g.joints[3].y(), g.angles[2]};
}

Pose2 end_effector_velocity_product(const JointVector& q_r, const JointVector& q_r_dot, const RobotModel& robot) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  Pose2 out = Pose2::Zero();
  double rate = 0.0;
  for (int i = 0; i < 3; ++i) {
    rate += q_r_dot(i);
    out.head<2>() -= robot.link_lengths[i] * rate * rate * link_direction(g.angles[i]);
  }
  return out;
}

Eigen::Matrix3d end_effector_jacobian(const JointVector& q_r, const RobotModel& robot) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  Eigen::Matrix3d J;
  for (int k = 0; k < 3; ++k) {
    J.block<2, 1>(0, k) = perp(g.joints[3] - g.joints[k]);
    J(2, k) = 1.0;
  }
  return J;
}

Eigen::Matrix3d arm_mass_matrix(const JointVector& q_r, const RobotModel& robot) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    Eigen::Matrix<double, 2, 3> Jc = Eigen::Matrix<double, 2, 3>::Zero();
    Eigen::RowVector3d Jw = Eigen::RowVector3d::Zero();
    for (int k = 0; k <= i; ++k) {
      Jc.col(k) = perp(g.centers[i] - g.joints[k]);
      Jw(k) = 1.0;
    }
    const double m = robot.link_masses[i];
    const double inertia = m * robot.link_lengths[i] * robot.link_lengths[i] / 12.0;
    B.noalias() += m * Jc.transpose() * Jc + inertia * Jw.transpose() * Jw;
  }
  return B;
}

double arm_potential(const JointVector& q_r, const RobotModel& robot, double gravity) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += gravity * robot.link_masses[i] * g.centers[i].y();
  return v;
}

JointVector arm_gravity(const JointVector& q_r, const RobotModel& robot, double gravity) {
  const ArmGeometry g = arm_geometry(q_r, robot);
  JointVector G = JointVector::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k <= i; ++k) {
      G(k) += gravity * robot.link_masses[i] * perp(g.centers[i] - g.joints[k]).y();
    }
  }
  return G;
}

JointVector arm_accel(const JointVector& q_r, const JointVector& q_r_dot, const JointVector& tau,
                      const RobotModel& robot, double gravity) {
  const Eigen::Matrix3d B = arm_mass_matrix(q_r, robot);
  const JointVector damping(robot.joint_damping[0], robot.joint_damping[1], robot.joint_damping[2]);
  const JointVector rhs = tau - arm_coriolis(q_r, q_r_dot, robot) * q_r_dot - arm_gravity(q_r, robot, gravity) -
                          damping.cwiseProduct(q_r_dot);
  Eigen::LLT<Eigen::Matrix3d> llt(B);
  if (llt.info() != Eigen::Success) throw SingularInertia("arm inertia matrix is not positive definite");
  return llt.solve(rhs);
}

}  // namespace dlo
