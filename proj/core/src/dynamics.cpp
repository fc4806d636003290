#include "dlo/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "dlo/errors.hpp"

namespace dlo {

namespace {

void check_dims(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  if (q.size() != p.dofs() || qdot.size() != p.dofs()) {
    throw std::invalid_argument("floating-base state must have n+4 entries");
  }
}

double fd_step(double value) { return 1e-6 * std::max(1.0, std::abs(value)); }

Vec base_frame_config(const Vec& theta, double phi, const ObjectParams& p) {
  Vec q = Vec::Zero(p.dofs());
  q.head(p.shape_dofs()) = theta;
  q(phi_index(p)) = phi;
  return q;
}

Mat solve_spd(const Mat& B, const Vec& rhs, const char* what) {
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) throw SingularInertia(what);
  return llt.solve(rhs);
}

// Jacobian of the floating-base configuration with respect to (q_r, theta).
Mat coupling_jacobian(const Vec& q_r, const RobotModel& robot, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  Mat Jc = Mat::Zero(p.dofs(), 3 + n1);
  Jc.block(0, 3, n1, n1).setIdentity();
  Jc.block(n1, 0, 3, 3) = end_effector_jacobian(q_r, robot);
  return Jc;
}

Vec theta_embedded(const Vec& shape_block, const ObjectParams& p) {
  Vec out = Vec::Zero(p.dofs());
  out.head(p.shape_dofs()) = shape_block;
  return out;
}

// Inertia, gravity force and velocity-product force in one pass over the
// mass points. The velocity products use the analytic point Hessians.
struct PointSums {
  Mat B;
  Vec G;
  Vec coriolis;
};

PointSums point_sums(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const int dim = p.dofs();
  PointSums out{Mat::Zero(dim, dim), Vec::Zero(dim), Vec::Zero(dim)};
  Vec omega(n1 + 1);
  omega << qdot.head(n1), qdot(phi_index(p));
  const bool moving = omega.squaredNorm() > 0.0;
  for (const auto& point : p.mass_points()) {
    if (point.mass == 0.0) continue;
    const PointKinematics k = point_kinematics(q, p, point.s, 0.0, moving);
    out.B.noalias() += point.mass * k.jacobian.transpose() * k.jacobian;
    out.G += (p.gravity * point.mass) * k.jacobian.row(1).transpose();
    if (moving) {
      const Point2 a(omega.dot(k.hessian_x * omega), omega.dot(k.hessian_y * omega));
      out.coriolis.noalias() += point.mass * k.jacobian.transpose() * a;
    }
  }
  return out;
}

// Christoffel velocity products of the arm links alone.
Vec coupled_coriolis_arm(const JointVector& q_r, const JointVector& v, const RobotModel& robot) {
  std::vector<Mat> dB(3);
  for (int k = 0; k < 3; ++k) {
    const double h = fd_step(q_r(k));
    JointVector qp = q_r;
    JointVector qm = q_r;
    qp(k) += h;
    qm(k) -= h;
    const Mat d = (arm_mass_matrix(qp, robot) - arm_mass_matrix(qm, robot)) / (2.0 * h);
    dB[k] = 0.5 * (d + d.transpose());
  }
  return christoffel_coriolis(dB, v) * v;
}

}  // namespace

Mat mass_matrix(const Vec& q, const ObjectParams& p) {
  Mat B = Mat::Zero(p.dofs(), p.dofs());
  for (const auto& point : p.mass_points()) {
    if (point.mass == 0.0) continue;
    const Mat J = point_kinematics(q, p, point.s, 0.0).jacobian;
    B.noalias() += point.mass * J.transpose() * J;
  }
  return B;
}

std::vector<Mat> mass_matrix_gradient(const Vec& q, const ObjectParams& p) {
  std::vector<Mat> dB(p.dofs(), Mat::Zero(p.dofs(), p.dofs()));
  for (int k = 0; k < p.dofs(); ++k) {
    if (k == x_index(p) || k == y_index(p)) continue;
    const double h = fd_step(q(k));
    Vec qp = q;
    Vec qm = q;
    qp(k) += h;
    qm(k) -= h;
    const Mat d = (mass_matrix(qp, p) - mass_matrix(qm, p)) / (2.0 * h);
    dB[k] = 0.5 * (d + d.transpose());
  }
  return dB;
}

Mat christoffel_coriolis(const std::vector<Mat>& dB, const Vec& qdot) {
  const auto n = qdot.size();
  Mat C = Mat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (qdot(k) == 0.0) continue;
    C += 0.5 * qdot(k) * dB[k];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    // second and third Christoffel terms: 1/2 (dB_ik/dq_j - dB_jk/dq_i) qdot_k
    const Vec a = dB[j] * qdot;
    C.col(j) += 0.5 * a;
    for (Eigen::Index i = 0; i < n; ++i) C(i, j) -= 0.5 * dB[i].row(j).dot(qdot);
  }
  return C;
}

Vec coriolis_force(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  check_dims(q, qdot, p);
  return point_sums(q, qdot, p).coriolis;
}

double gravity_potential(const Vec& q, const ObjectParams& p) {
  double v = 0.0;
  for (const auto& point : p.mass_points()) {
    if (point.mass == 0.0) continue;
    v += p.gravity * point.mass * fk_point(q, p, point.s, 0.0).y();
  }
  return v;
}

Vec gravity_force(const Vec& q, const ObjectParams& p) {
  Vec G = Vec::Zero(p.dofs());
  for (const auto& point : p.mass_points()) {
    if (point.mass == 0.0) continue;
    G += (p.gravity * point.mass) * point_kinematics(q, p, point.s, 0.0).jacobian.row(1).transpose();
  }
  return G;
}

double elastic_potential(const Vec& theta, const ObjectParams& p) {
  const Vec e = theta - p.rest_curvature;
  return 0.5 * p.stiffness * e.dot(elasticity_matrix(p.degree) * e);
}

DynamicsTerms assemble(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  check_dims(q, qdot, p);
  const int n1 = p.shape_dofs();
  const Mat H = elasticity_matrix(p.degree);
  DynamicsTerms t;
  t.B = mass_matrix(q, p);
  t.C = christoffel_coriolis(mass_matrix_gradient(q, p), qdot);
  t.Cqdot = t.C * qdot;
  t.G = gravity_force(q, p);
  t.K_force = theta_embedded(p.stiffness * H * (q.head(n1) - p.rest_curvature), p);
  t.D_force = theta_embedded(p.damping * H * qdot.head(n1), p);
  return t;
}

Energies energies(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  check_dims(q, qdot, p);
  Energies e;
  e.kinetic = 0.5 * qdot.dot(mass_matrix(q, p) * qdot);
  e.gravitational = gravity_potential(q, p);
  e.elastic = elastic_potential(q.head(p.shape_dofs()), p);
  return e;
}

Vec floating_base_accel(const Vec& q, const Vec& qdot, const Wrench& wrench, const ObjectParams& p) {
  check_dims(q, qdot, p);
  const int n1 = p.shape_dofs();
  const Mat H = elasticity_matrix(p.degree);
  const PointSums sums = point_sums(q, qdot, p);
  Vec rhs = -(sums.coriolis + sums.G);
  rhs.head(n1) -= p.stiffness * H * (q.head(n1) - p.rest_curvature) + p.damping * H * qdot.head(n1);
  rhs.tail<3>() += wrench;
  return solve_spd(sums.B, rhs, "floating-base inertia matrix is not positive definite");
}

Wrench base_wrench(const Vec& q, const Vec& qdot, const Vec& qddot, const ObjectParams& p) {
  if (qddot.size() != p.dofs()) throw std::invalid_argument("acceleration must have n+4 entries");
  const DynamicsTerms t = assemble(q, qdot, p);
  const Vec lhs = t.B * qddot + t.Cqdot + t.G + t.K_force + t.D_force;
  return lhs.tail<3>();
}

Wrench clamping_wrench(const Vec& q, const Vec& qdot, const ObjectParams& p) {
  check_dims(q, qdot, p);
  const int n1 = p.shape_dofs();
  const Mat H = elasticity_matrix(p.degree);
  const PointSums sums = point_sums(q, qdot, p);
  const Mat& B = sums.B;
  Vec h = sums.coriolis + sums.G;
  h.head(n1) += p.stiffness * H * (q.head(n1) - p.rest_curvature) + p.damping * H * qdot.head(n1);
  const Vec theta_dd = solve_spd(B.topLeftCorner(n1, n1), -h.head(n1),
                                 "shape inertia matrix is not positive definite");
  return B.bottomLeftCorner(3, n1) * theta_dd + h.tail<3>();
}

Mat shape_mass_matrix(const Vec& theta, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  return mass_matrix(base_frame_config(theta, 0.0, p), p).topLeftCorner(n1, n1);
}

Vec shape_gravity(const Vec& theta, double phi, const ObjectParams& p) {
  return gravity_force(base_frame_config(theta, phi, p), p).head(p.shape_dofs());
}

Mat shape_gravity_jacobian(const Vec& theta, double phi, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const Vec q = base_frame_config(theta, phi, p);
  Mat out = Mat::Zero(n1, n1 + 1);
  for (const auto& point : p.mass_points()) {
    if (point.mass == 0.0) continue;
    const PointKinematics k = point_kinematics(q, p, point.s, 0.0, true);
    out += (p.gravity * point.mass) * k.hessian_y.topRows(n1);
  }
  return out;
}

Vec shape_coriolis_force(const Vec& theta, const Vec& thetadot, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  return coriolis_force(base_frame_config(theta, 0.0, p), theta_embedded(thetadot, p), p).head(n1);
}

Vec zero_dynamics_accel(const Vec& theta, const Vec& thetadot, double phi_star, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  if (theta.size() != n1 || thetadot.size() != n1) {
    throw std::invalid_argument("shape state must have n+1 entries");
  }
  const Mat H = elasticity_matrix(p.degree);
  const Vec rhs = -(shape_coriolis_force(theta, thetadot, p) + p.damping * H * thetadot +
                    shape_gravity(theta, phi_star, p) + p.stiffness * H * (theta - p.rest_curvature));
  return solve_spd(shape_mass_matrix(theta, p), rhs, "shape inertia matrix is not positive definite");
}

// --- coupled model -----------------------------------------------------------

Vec object_config(const Vec& q_r, const Vec& theta, const RobotModel& robot, const ObjectParams& p) {
  const Pose2 pose = end_effector_pose(q_r, robot);
  Vec q(p.dofs());
  q.head(p.shape_dofs()) = theta;
  q.tail<3>() = pose;
  return q;
}

Mat coupled_mass_matrix(const Vec& qc, const RobotModel& robot, const ObjectParams& p) {
  const Vec q_r = qc.head<3>();
  const Vec qo = object_config(q_r, qc.tail(p.shape_dofs()), robot, p);
  const Mat Jc = coupling_jacobian(q_r, robot, p);
  Mat B = Jc.transpose() * mass_matrix(qo, p) * Jc;
  B.topLeftCorner<3, 3>() += arm_mass_matrix(q_r, robot);
  return B;
}

Vec coupled_gravity(const Vec& qc, const RobotModel& robot, const ObjectParams& p) {
  const Vec q_r = qc.head<3>();
  const Vec qo = object_config(q_r, qc.tail(p.shape_dofs()), robot, p);
  Vec G = coupling_jacobian(q_r, robot, p).transpose() * gravity_force(qo, p);
  G.head<3>() += arm_gravity(q_r, robot, p.gravity);
  return G;
}

Vec coupled_coriolis_force(const Vec& qc, const Vec& qcdot, const RobotModel& robot, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const JointVector q_r = qc.head<3>();
  const JointVector v = qcdot.head<3>();
  const Mat Jc = coupling_jacobian(q_r, robot, p);
  const Vec qo = object_config(q_r, qc.tail(n1), robot, p);
  const PointSums sums = point_sums(qo, Jc * qcdot, p);
  Vec jc_dot = Vec::Zero(p.dofs());
  jc_dot.tail<3>() = end_effector_velocity_product(q_r, v, robot);
  Vec out = Jc.transpose() * (sums.coriolis + sums.B * jc_dot);
  out.head<3>() += coupled_coriolis_arm(q_r, v, robot);
  return out;
}

double coupled_gravity_potential(const Vec& qc, const RobotModel& robot, const ObjectParams& p) {
  const Vec q_r = qc.head<3>();
  return arm_potential(q_r, robot, p.gravity) +
         gravity_potential(object_config(q_r, qc.tail(p.shape_dofs()), robot, p), p);
}

CoupledTerms coupled_assemble(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                              const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const int dim = 3 + n1;
  if (qc.size() != dim || qcdot.size() != dim) {
    throw std::invalid_argument("coupled state must have 3+n+1 entries");
  }
  std::vector<Mat> dB(dim);
  for (int k = 0; k < dim; ++k) {
    const double h = fd_step(qc(k));
    Vec qp = qc;
    Vec qm = qc;
    qp(k) += h;
    qm(k) -= h;
    const Mat d = (coupled_mass_matrix(qp, robot, p) - coupled_mass_matrix(qm, robot, p)) / (2.0 * h);
    dB[k] = 0.5 * (d + d.transpose());
  }
  const Mat H = elasticity_matrix(p.degree);
  CoupledTerms t;
  t.B = coupled_mass_matrix(qc, robot, p);
  t.C = christoffel_coriolis(dB, qcdot);
  t.Cqdot = t.C * qcdot;
  t.G = coupled_gravity(qc, robot, p);
  t.K_force = Vec::Zero(dim);
  t.K_force.tail(n1) = p.stiffness * H * (qc.tail(n1) - p.rest_curvature);
  t.D_force = Vec::Zero(dim);
  for (int i = 0; i < 3; ++i) t.D_force(i) = robot.joint_damping[i] * qcdot(i);
  t.D_force.tail(n1) = p.damping * H * qcdot.tail(n1);
  return t;
}

Energies coupled_energies(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                          const ObjectParams& p) {
  Energies e;
  e.kinetic = 0.5 * qcdot.dot(coupled_mass_matrix(qc, robot, p) * qcdot);
  e.gravitational = coupled_gravity_potential(qc, robot, p);
  e.elastic = elastic_potential(qc.tail(p.shape_dofs()), p);
  return e;
}

Vec coupled_accel(const Vec& q_r, const Vec& theta, const Vec& q_r_dot, const Vec& theta_dot,
                  const Eigen::Vector3d& tau, const RobotModel& robot, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const int dim = 3 + n1;
  if (q_r.size() != 3 || q_r_dot.size() != 3) throw std::invalid_argument("robot state must have 3 entries");
  if (theta.size() != n1 || theta_dot.size() != n1) {
    throw std::invalid_argument("shape state must have n+1 entries");
  }
  Vec out = Vec::Zero(dim);
  if (p.total_mass() == 0.0) {
    out.head<3>() = arm_accel(q_r, q_r_dot, tau, robot, p.gravity);
    return out;
  }
  Vec qc(dim);
  Vec qcdot(dim);
  qc << q_r, theta;
  qcdot << q_r_dot, theta_dot;

  const Mat Jc = coupling_jacobian(q_r, robot, p);
  const PointSums sums = point_sums(object_config(q_r, theta, robot, p), Jc * qcdot, p);
  Vec jc_dot = Vec::Zero(p.dofs());
  jc_dot.tail<3>() = end_effector_velocity_product(q_r, q_r_dot, robot);
  Mat B = Jc.transpose() * sums.B * Jc;
  B.topLeftCorner<3, 3>() += arm_mass_matrix(q_r, robot);
  Vec rhs = -(Jc.transpose() * (sums.coriolis + sums.B * jc_dot + sums.G));
  rhs.head<3>() -= coupled_coriolis_arm(q_r, q_r_dot, robot) + arm_gravity(q_r, robot, p.gravity);
  const Mat H = elasticity_matrix(p.degree);
  for (int i = 0; i < 3; ++i) rhs(i) += tau(i) - robot.joint_damping[i] * q_r_dot(i);
  rhs.tail(n1) -= p.stiffness * H * (theta - p.rest_curvature) + p.damping * H * theta_dot;
  return solve_spd(B, rhs, "coupled inertia matrix is not positive definite");
}

Eigen::Vector3d holding_torque(const Vec& qc, const Vec& qcdot, const RobotModel& robot,
                               const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  const CoupledTerms t = coupled_assemble(qc, qcdot, robot, p);
  const Vec h = t.Cqdot + t.G + t.K_force + t.D_force;
  const Vec theta_dd = solve_spd(t.B.bottomRightCorner(n1, n1), -h.tail(n1),
                                 "shape inertia matrix is not positive definite");
  return t.B.topRightCorner(3, n1) * theta_dd + h.head<3>();
}

}  // namespace dlo
