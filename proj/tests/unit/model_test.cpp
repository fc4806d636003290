#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "dlo/model.hpp"
#include "frozen_values.hpp"
#include "test_support.hpp"

namespace dlo {
namespace {

using test::fixture;

// Adaptive Gauss-Kronrod reference for the backbone position.
Point2 reference_point(const Vec& q, const ObjectParams& p, double s, double d) {
  const int n1 = p.shape_dofs();
  const Vec theta = q.head(n1);
  const double phi = q(phi_index(p));
  auto a = [&](double v) { return alpha(v, theta, phi); };
  using boost::math::quadrature::gauss_kronrod;
  double x = q(x_index(p));
  double y = q(y_index(p));
  if (s > 0.0) {
    x += p.length * gauss_kronrod<double, 31>::integrate([&](double v) { return std::sin(a(v)); }, 0.0, s, 15, 1e-14);
    y -= p.length * gauss_kronrod<double, 31>::integrate([&](double v) { return std::cos(a(v)); }, 0.0, s, 15, 1e-14);
  }
  return {x - p.diameter * d * std::cos(a(s)), y - p.diameter * d * std::sin(a(s))};
}

TEST(Model, AlphaIsPhiPlusCurvatureIntegral) {
  Vec theta(3);
  theta << 1.0, -2.0, 6.0;
  EXPECT_DOUBLE_EQ(alpha(0.0, theta, 0.4), 0.4);
  EXPECT_NEAR(alpha(0.5, theta, 0.4), 0.4 + 0.5 - 0.25 + 0.25, 1e-15);
  EXPECT_THROW(alpha(1.5, theta, 0.0), std::domain_error);
}

TEST(Model, WrapAngleRange) {
  for (double a : {-10.0, -std::numbers::pi, -1.0, 0.0, 3.0, std::numbers::pi, 7.5}) {
    const double w = wrap_angle(a);
    EXPECT_GE(w, -std::numbers::pi);
    EXPECT_LT(w, std::numbers::pi);
    EXPECT_NEAR(std::remainder(w - a, 2 * std::numbers::pi), 0.0, 1e-12);
  }
}

TEST(Model, GaussLegendreIsExactForDegree31) {
  const auto& rule = gauss_legendre_16();
  ASSERT_EQ(rule.nodes.size(), 16u);
  for (int k = 0; k <= 31; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 16; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(sum, exact, 1e-14) << "degree " << k;
  }
}

TEST(Model, PointMatchesFrozenValues) {
  const ObjectParams p = fixture("ob1");
  for (const auto& c : frozen::kOb1Points) {
    const Vec q = Eigen::Map<const Vec>(c.q, 5);
    const Point2 pt = fk_point(q, p, c.s, c.d);
    EXPECT_NEAR(pt.x(), c.x, 1e-12);
    EXPECT_NEAR(pt.y(), c.y, 1e-12);
  }
}

TEST(Model, PointMatchesAdaptiveQuadrature) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& name : test::object_names()) {
    const ObjectParams p = fixture(name);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec q = test::random_config(rng, p, 6.0);
      const double s = u(rng);
      const double d = u(rng) - 0.5;
      const Point2 got = fk_point(q, p, s, d);
      const Point2 want = reference_point(q, p, s, d);
      EXPECT_LT((got - want).norm(), 1e-12) << name;
    }
  }
}

TEST(Model, StraightObjectHangsDown) {
  ObjectParams p = fixture("ob1");
  Vec q = Vec::Zero(p.dofs());
  q(x_index(p)) = 0.2;
  const Point2 tip = fk_point(q, p, 1.0, 0.0);
  EXPECT_NEAR(tip.x(), 0.2, 1e-15);
  EXPECT_NEAR(tip.y(), -p.length, 1e-15);
}

TEST(Model, JacobianMatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& name : test::object_names()) {
    const ObjectParams p = fixture(name);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec q = test::random_config(rng, p);
      const double s = u(rng);
      const double d = u(rng) - 0.5;
      const Mat J = fk_jacobian(q, p, s, d);
      const Mat fd = test::central_jacobian([&](const Vec& x) -> Vec { return fk_point(x, p, s, d); }, q);
      EXPECT_LT((J - fd).cwiseAbs().maxCoeff(), 1e-8) << name;
    }
  }
}

TEST(Model, HessiansMatchJacobianDifferences) {
  std::mt19937_64 rng(5);
  const ObjectParams p = fixture("ob3");
  const int na = p.shape_dofs() + 1;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec q = test::random_config(rng, p);
    const PointKinematics k = point_kinematics(q, p, 0.7, 0.3, true);
    // hessians are over the angular coordinates (theta..., phi)
    auto angular = [&](const Vec& a) {
      Vec x = q;
      x.head(na - 1) = a.head(na - 1);
      x(phi_index(p)) = a(na - 1);
      return x;
    };
    Vec a0(na);
    a0 << q.head(na - 1), q(phi_index(p));
    const Mat hx = test::central_jacobian(
        [&](const Vec& a) -> Vec {
          const Mat J = fk_jacobian(angular(a), p, 0.7, 0.3);
          Vec row(na);
          row << J.row(0).head(na - 1).transpose(), J(0, phi_index(p));
          return row;
        },
        a0);
    EXPECT_LT((k.hessian_x - hx).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_LT((k.hessian_x - k.hessian_x.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Model, ElasticityMatrixIsHilbert) {
  const Mat H = elasticity_matrix(3);
  ASSERT_EQ(H.rows(), 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(H(i, j), 1.0 / (i + j + 1));
  }
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat>(H).eigenvalues().minCoeff(), 0.0);
}

TEST(Model, LumpedMassesSumToTotal) {
  const ObjectParams p = fixture("ob2");
  const auto pts = p.mass_points();
  ASSERT_EQ(pts.size(), 8u);
  double total = 0.0;
  for (const auto& m : pts) total += m.mass;
  EXPECT_NEAR(total, p.base_mass + p.body_mass + p.tip_mass, 1e-15);
  EXPECT_DOUBLE_EQ(pts[1].s, 1.0 / 12);
  EXPECT_DOUBLE_EQ(pts[6].s, 11.0 / 12);
}

TEST(Model, RejectsOutOfRangeAbscissa) {
  const ObjectParams p = fixture("ob1");
  const Vec q = Vec::Zero(p.dofs());
  EXPECT_THROW(fk_point(q, p, -0.1, 0.0), std::domain_error);
  EXPECT_THROW(fk_point(q, p, 0.5, 0.6), std::domain_error);
}

TEST(Model, ValidateRejectsBadParameters) {
  ObjectParams p = fixture("ob1");
  p.length = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = fixture("ob1");
  p.rest_curvature = Vec::Zero(3);
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace dlo
