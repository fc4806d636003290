#include "dlo/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlo {

namespace {

void check_abscissa(double s, double d) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("abscissa s=" + std::to_string(s) + " outside [0, 1]");
  }
  if (!(d >= -0.5 && d <= 0.5)) {
    throw std::domain_error("offset d=" + std::to_string(d) + " outside [-1/2, 1/2]");
  }
}

// Sensitivities of alpha(v) to the angular coordinates (theta_0..theta_n, phi).
void angle_sensitivities(double v, int shape_dofs, Vec& c) {
  double power = v;
  for (int i = 0; i < shape_dofs; ++i) {
    c(i) = power / (i + 1);
    power *= v;
  }
  c(shape_dofs) = 1.0;
}

double curvature_integral(double s, const Eigen::Ref<const Vec>& theta) {
  double sum = 0.0;
  double power = s;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    sum += theta(i) * power / static_cast<double>(i + 1);
    power *= s;
  }
  return sum;
}

QuadratureRule make_gauss_legendre(int order) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Chebyshev initial guess, then Newton on P_order.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift
  if (wrapped >= std::numbers::pi) wrapped -= two_pi;
  return wrapped;
}

const QuadratureRule& gauss_legendre_16() {
  static const QuadratureRule rule = make_gauss_legendre(16);
  return rule;
}

std::vector<double> ObjectParams::default_lump_abscissae() {
  return {1.0 / 12, 3.0 / 12, 5.0 / 12, 7.0 / 12, 9.0 / 12, 11.0 / 12};
}

std::vector<LumpedMass> ObjectParams::mass_points() const {
  std::vector<LumpedMass> points;
  points.reserve(lump_s.size() + 2);
  points.push_back({0.0, base_mass});
  const double lump = lump_s.empty() ? 0.0 : body_mass / static_cast<double>(lump_s.size());
  for (double s : lump_s) points.push_back({s, lump});
  points.push_back({1.0, tip_mass});
  return points;
}

void ObjectParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("ObjectParams: " + msg); };
  if (!(length > 0.0)) fail("L must be positive");
  if (!(diameter >= 0.0)) fail("D must be non-negative");
  if (!(body_mass >= 0.0 && base_mass >= 0.0 && tip_mass >= 0.0)) fail("masses must be non-negative");
  if (!(stiffness >= 0.0)) fail("k must be non-negative");
  if (!(damping >= 0.0)) fail("beta must be non-negative");
  if (degree < 0) fail("degree must be non-negative");
  if (rest_curvature.size() != shape_dofs()) fail("theta_bar must have n+1 entries");
  if (!rest_curvature.allFinite()) fail("theta_bar must be finite");
  if (!std::isfinite(gravity)) fail("gravity must be finite");
  for (std::size_t i = 0; i < lump_s.size(); ++i) {
    if (!(lump_s[i] > 0.0 && lump_s[i] < 1.0)) fail("lump abscissae must lie strictly inside (0, 1)");
    if (i > 0 && !(lump_s[i] > lump_s[i - 1])) fail("lump abscissae must be sorted");
  }
}

Vec FloatingBaseConfig::to_vector() const {
  Vec q(theta.size() + 3);
  q.head(theta.size()) = theta;
  q.tail<3>() << x, y, phi;
  return q;
}

FloatingBaseConfig FloatingBaseConfig::from_vector(const Vec& q) {
  if (q.size() < 4) throw std::invalid_argument("floating-base vector needs at least 4 entries");
  const auto n1 = q.size() - 3;
  return {q.head(n1), q(n1), q(n1 + 1), wrap_angle(q(n1 + 2))};
}

double alpha(double s, const Vec& theta, double phi) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("abscissa s=" + std::to_string(s) + " outside [0, 1]");
  }
  return phi + curvature_integral(s, theta);
}

PointKinematics point_kinematics(const Vec& q, const ObjectParams& p, double s, double d,
                                 bool with_hessian) {
  check_abscissa(s, d);
  const int n1 = p.shape_dofs();
  if (q.size() != p.dofs()) throw std::invalid_argument("configuration dimension mismatch");
  const int na = n1 + 1;
  const auto theta = q.head(n1);
  const double phi = q(phi_index(p));
  const double L = p.length;

  PointKinematics out;
  out.position = Point2(q(x_index(p)), q(y_index(p)));
  Eigen::Matrix<double, 2, Eigen::Dynamic> angular = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, na);
  if (with_hessian) {
    out.hessian_x = Mat::Zero(na, na);
    out.hessian_y = Mat::Zero(na, na);
  }

  Vec c(na);
  if (s > 0.0) {
    const auto& rule = gauss_legendre_16();
    const double half = 0.5 * s;
    double* hx = with_hessian ? out.hessian_x.data() : nullptr;
    double* hy = with_hessian ? out.hessian_y.data() : nullptr;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double v = half * (rule.nodes[k] + 1.0);
      const double w = half * rule.weights[k] * L;
      const double a = phi + curvature_integral(v, theta);
      const double ws = w * std::sin(a);
      const double wc = w * std::cos(a);
      angle_sensitivities(v, n1, c);
      out.position.x() += ws;
      out.position.y() -= wc;
      for (int i = 0; i < na; ++i) {
        angular(0, i) += wc * c(i);
        angular(1, i) += ws * c(i);
      }
      if (with_hessian) {
        for (int j = 0; j < na; ++j) {
          const double sj = ws * c(j);
          const double cj = wc * c(j);
          for (int i = 0; i <= j; ++i) {
            hx[j * na + i] -= sj * c(i);
            hy[j * na + i] += cj * c(i);
          }
        }
      }
    }
    if (with_hessian) {
      for (int j = 0; j < na; ++j) {
        for (int i = j + 1; i < na; ++i) {
          out.hessian_x(i, j) = out.hessian_x(j, i);
          out.hessian_y(i, j) = out.hessian_y(j, i);
        }
      }
    }
  }

  if (d != 0.0 && p.diameter != 0.0) {
    const double a = phi + curvature_integral(s, theta);
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    const double off = p.diameter * d;
    angle_sensitivities(s, n1, c);
    out.position += off * Point2(-ca, -sa);
    angular.row(0) += (off * sa) * c.transpose();
    angular.row(1) -= (off * ca) * c.transpose();
    if (with_hessian) {
      out.hessian_x.noalias() += (off * ca) * c * c.transpose();
      out.hessian_y.noalias() += (off * sa) * c * c.transpose();
    }
  }

  out.jacobian = Mat::Zero(2, p.dofs());
  out.jacobian.leftCols(n1) = angular.leftCols(n1);
  out.jacobian(0, x_index(p)) = 1.0;
  out.jacobian(1, y_index(p)) = 1.0;
  out.jacobian.col(phi_index(p)) = angular.col(n1);
  return out;
}

Point2 fk_point(const Vec& q, const ObjectParams& p, double s, double d) {
  return point_kinematics(q, p, s, d).position;
}

Point2 fk_point(const FloatingBaseConfig& q, const ObjectParams& p, double s, double d) {
  return fk_point(q.to_vector(), p, s, d);
}

Mat fk_jacobian(const Vec& q, const ObjectParams& p, double s, double d) {
  return point_kinematics(q, p, s, d).jacobian;
}

Mat fk_jacobian(const FloatingBaseConfig& q, const ObjectParams& p, double s, double d) {
  return fk_jacobian(q.to_vector(), p, s, d);
}

Mat elasticity_matrix(int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  const int n1 = degree + 1;
  Mat h(n1, n1);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) h(i, j) = 1.0 / (i + j + 1);
  }
  return h;
}

}  // namespace dlo
