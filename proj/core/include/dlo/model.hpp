#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dlo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Point2 = Eigen::Vector2d;

/// Wraps an angle to [-pi, pi).
double wrap_angle(double angle);

/// A point mass on the backbone at normalized abscissa `s`.
struct LumpedMass {
  double s;
  double mass;
};

/// Physical and identified constants of one deformable linear object.
///
/// Curvature is a polynomial of degree `degree` in the normalized abscissa,
/// so every shape vector has `degree + 1` coefficients. The distributed body
/// mass is replaced by equal point masses at `lump_s`; the base and tip
/// masses always sit at s = 0 and s = 1.
struct ObjectParams {
  std::string name;
  double length = 1.0;     // m
  double diameter = 0.0;   // m
  double body_mass = 0.0;  // kg, split equally across lump_s
  double base_mass = 0.0;  // kg, at s = 0
  double tip_mass = 0.0;   // kg, at s = 1
  double stiffness = 0.0;  // k
  double damping = 0.0;    // beta
  Vec rest_curvature = Vec::Zero(2);
  int degree = 1;
  std::vector<double> lump_s = default_lump_abscissae();
  double gravity = 9.81;

  static std::vector<double> default_lump_abscissae();

  /// Number of curvature coefficients (n + 1).
  int shape_dofs() const { return degree + 1; }
  /// Dimension of the floating-base configuration (n + 4).
  int dofs() const { return degree + 4; }
  double total_mass() const { return body_mass + base_mass + tip_mass; }

  /// The full mass schedule: base, interior lumps, tip.
  std::vector<LumpedMass> mass_points() const;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// q_O = (theta, x, y, phi): curvature coefficients plus the grasped-end pose.
struct FloatingBaseConfig {
  Vec theta;
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;

  /// Packs into (theta_0..theta_n, x, y, phi).
  Vec to_vector() const;
  /// Unpacks a (n + 4) vector; phi is wrapped.
  static FloatingBaseConfig from_vector(const Vec& q);
};

/// Index helpers into a floating-base vector of dimension n + 4.
inline int x_index(const ObjectParams& p) { return p.shape_dofs(); }
inline int y_index(const ObjectParams& p) { return p.shape_dofs() + 1; }
inline int phi_index(const ObjectParams& p) { return p.shape_dofs() + 2; }

/// Backbone tangent angle at abscissa s, measured from the downward vertical.
double alpha(double s, const Vec& theta, double phi);

/// Position of the material point (s, d) in the base frame.
Point2 fk_point(const FloatingBaseConfig& q, const ObjectParams& p, double s, double d);
Point2 fk_point(const Vec& q, const ObjectParams& p, double s, double d);

/// d fk_point / d q_O, ordered (theta_0..theta_n, x, y, phi).
Mat fk_jacobian(const FloatingBaseConfig& q, const ObjectParams& p, double s, double d);
Mat fk_jacobian(const Vec& q, const ObjectParams& p, double s, double d);

/// Gram matrix of the monomial curvature basis, H_ij = 1 / (i + j + 1).
Mat elasticity_matrix(int degree);

/// Position, Jacobian and (optionally) the second derivatives of one
/// material point with respect to the angular coordinates (theta, phi).
///
/// `hessian_x(a, b)` and `hessian_y(a, b)` index the angular coordinates
/// with theta_0..theta_n first and phi last; the translation coordinates
/// enter linearly and have no second derivatives.
struct PointKinematics {
  Point2 position;
  Mat jacobian;  // 2 x (n + 4)
  Mat hessian_x;
  Mat hessian_y;
};

PointKinematics point_kinematics(const Vec& q, const ObjectParams& p, double s, double d,
                                 bool with_hessian = false);

/// Gauss-Legendre rule on [-1, 1] used for the kinematic integrals.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre_16();

}  // namespace dlo
