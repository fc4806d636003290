#include "dlo/identify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dlo/dynamics.hpp"
#include "dlo/errors.hpp"

namespace dlo {

namespace {

constexpr std::array<double, 3> kMarkerAbscissae{0.0, 0.5, 1.0};
constexpr int kSavitzkyGolayWindow = 7;
constexpr int kSavitzkyGolayOrder = 3;

Vec stack_markers(const MarkerSet& m) {
  Vec out(6);
  out << m.start, m.mid, m.end;
  return out;
}

}  // namespace

void MarkerSet::validate(double length, double slack) const {
  if (!start.allFinite() || !mid.allFinite() || !end.allFinite()) {
    throw std::invalid_argument("marker coordinates must be finite");
  }
  const double limit = length * (1.0 + slack);
  if ((mid - start).norm() > limit || (end - start).norm() > limit || (end - mid).norm() > limit) {
    throw std::invalid_argument("marker distances exceed the object length");
  }
}

Vec marker_positions(const Vec& q, const ObjectParams& p) {
  Vec out(6);
  for (int i = 0; i < 3; ++i) out.segment<2>(2 * i) = fk_point(q, p, kMarkerAbscissae[i], 0.0);
  return out;
}

Mat marker_jacobian(const Vec& q, const ObjectParams& p) {
  Mat J(6, p.dofs());
  for (int i = 0; i < 3; ++i) J.middleRows<2>(2 * i) = fk_jacobian(q, p, kMarkerAbscissae[i], 0.0);
  return J;
}

MarkerSet markers_at(const Vec& q, const ObjectParams& p) {
  const Vec m = marker_positions(q, p);
  return {m.segment<2>(0), m.segment<2>(2), m.segment<2>(4)};
}

IkResult numerical_ik(const MarkerSet& markers, const Vec& q_init, const ObjectParams& p,
                      const IkOptions& options) {
  if (!(options.eps > 0.0)) throw std::invalid_argument("IK tolerance must be positive");
  if (!(options.delta > 0.0 && options.delta <= 1.0)) throw std::invalid_argument("IK step gain must be in (0, 1]");
  if (options.max_iterations < 1) throw std::invalid_argument("IK iteration cap must be at least 1");
  if (q_init.size() != p.dofs()) throw std::invalid_argument("initial configuration dimension mismatch");

  const Vec target = stack_markers(markers);
  const double lambda2 = options.damping * options.damping;
  Vec q = q_init;
  Vec e = target - marker_positions(q, p);
  double residual = e.norm();

  for (int i = 0; i < options.max_iterations; ++i) {
    if (residual < options.eps) return {q, residual, i};

    const Mat J = marker_jacobian(q, p);
    const Mat JtJ = J.transpose() * J + lambda2 * Mat::Identity(J.cols(), J.cols());
    Vec step = options.delta * JtJ.ldlt().solve(J.transpose() * e);
    // Backtrack until the marker residual does not increase.
    Vec q_next = q + step;
    Vec e_next = target - marker_positions(q_next, p);
    for (int halving = 0; halving < 40 && e_next.norm() > residual; ++halving) {
      step *= 0.5;
      q_next = q + step;
      e_next = target - marker_positions(q_next, p);
    }
    const double next_residual = e_next.norm();
    // A stalled residual is a least-squares fit of inconsistent (noisy)
    // markers; further iterations cannot improve it.
    if (next_residual > residual || residual - next_residual <= 1e-9 * residual) {
      if (next_residual <= residual) return {q_next, next_residual, i + 1};
      return {q, residual, i};
    }
    q = q_next;
    e = e_next;
    residual = next_residual;
  }
  if (residual < options.eps) return {q, residual, options.max_iterations};
  throw ConvergenceFailure("numerical IK did not converge within the iteration cap", q, residual);
}

FloatingBaseConfig numerical_ik(const MarkerSet& markers, const FloatingBaseConfig& q_init,
                                const ObjectParams& p, const IkOptions& options) {
  return FloatingBaseConfig::from_vector(numerical_ik(markers, q_init.to_vector(), p, options).q);
}

StaticFit identify_static(std::span<const EquilibriumSample> samples, const ObjectParams& p) {
  const int n1 = p.shape_dofs();
  if (samples.empty()) throw std::invalid_argument("static identification needs at least one sample");
  const Mat H = elasticity_matrix(p.degree);
  const auto rows = static_cast<Eigen::Index>(samples.size()) * n1;
  Mat A(rows, n1 + 1);
  Vec b(rows);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& sample = samples[i];
    if (sample.theta_star.size() != n1) throw std::invalid_argument("equilibrium sample has wrong dimension");
    const auto r0 = static_cast<Eigen::Index>(i) * n1;
    A.block(r0, 0, n1, 1) = H * sample.theta_star;
    A.block(r0, 1, n1, n1) = -H;
    b.segment(r0, n1) = -shape_gravity(sample.theta_star, sample.phi, p);
  }

  Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const int rank = static_cast<int>(svd.rank());
  if (rank < n1 + 1) {
    throw RankDeficient("static regressor is rank deficient (insufficient phi diversity)", rank);
  }
  const Vec solution = svd.solve(b);
  const double k = solution(0);
  if (!(k > 0.0)) throw NonPhysical("identified stiffness is not positive: k = " + std::to_string(k));
  return {k, solution.tail(n1) / k, (A * solution - b).norm(), rank};
}

DampingFit identify_damping(const ShapeSeries& series, const ObjectParams& p) {
  const std::size_t count = series.times.size();
  if (series.theta.size() != count || series.theta_dot.size() != count || series.theta_ddot.size() != count) {
    throw std::invalid_argument("shape series columns have different lengths");
  }
  const Mat H = elasticity_matrix(p.degree);
  double aa = 0.0;
  double ar = 0.0;
  std::vector<Vec> a(count);
  std::vector<Vec> r(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec& th = series.theta[i];
    const Vec& thd = series.theta_dot[i];
    a[i] = H * thd;
    r[i] = -(shape_mass_matrix(th, p) * series.theta_ddot[i] + shape_coriolis_force(th, thd, p) +
             shape_gravity(th, series.phi, p) + p.stiffness * H * (th - p.rest_curvature));
    aa += a[i].squaredNorm();
    ar += a[i].dot(r[i]);
  }
  if (!(aa > 1e-12)) throw Degenerate("object never moved: no excitation for damping identification");
  const double beta = ar / aa;
  double res2 = 0.0;
  for (std::size_t i = 0; i < count; ++i) res2 += (r[i] - beta * a[i]).squaredNorm();
  return {beta, std::sqrt(res2), count};
}

DampingFit identify_damping(const Trajectory& traj, const ObjectParams& p) {
  traj.validate();
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const int n1 = p.shape_dofs();
  const Vec base0 = traj.states.front().tail<3>();
  ShapeSeries series;
  series.phi = base0(2);
  series.times = traj.times;
  for (const Vec& q : traj.states) {
    if ((q.tail<3>() - base0).cwiseAbs().maxCoeff() > 1e-9) {
      throw std::invalid_argument("damping identification requires a fixed base");
    }
    series.theta.push_back(q.head(n1));
  }
  auto [thd, thdd] = differentiate_trajectory(series.times, series.theta);
  series.theta_dot = std::move(thd);
  series.theta_ddot = std::move(thdd);
  return identify_damping(series, p);
}

std::pair<std::vector<Vec>, std::vector<Vec>> differentiate_trajectory(std::span<const double> times,
                                                                       std::span<const Vec> theta) {
  const auto count = static_cast<int>(times.size());
  if (static_cast<int>(theta.size()) != count) throw std::invalid_argument("times and samples differ in length");
  if (count < kSavitzkyGolayWindow) {
    throw std::invalid_argument("differentiation needs at least 7 samples");
  }
  for (int i = 1; i < count; ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("sample times must be strictly increasing");
  }

  const auto dim = theta.front().size();
  std::vector<Vec> first(count, Vec::Zero(dim));
  std::vector<Vec> second(count, Vec::Zero(dim));
  Mat V(kSavitzkyGolayWindow, kSavitzkyGolayOrder + 1);
  Mat Y(kSavitzkyGolayWindow, dim);
  for (int i = 0; i < count; ++i) {
    const int lo = std::clamp(i - kSavitzkyGolayWindow / 2, 0, count - kSavitzkyGolayWindow);
    const double scale = (times[lo + kSavitzkyGolayWindow - 1] - times[lo]) / (kSavitzkyGolayWindow - 1);
    for (int r = 0; r < kSavitzkyGolayWindow; ++r) {
      const double tau = (times[lo + r] - times[i]) / scale;
      double power = 1.0;
      for (int c = 0; c <= kSavitzkyGolayOrder; ++c) {
        V(r, c) = power;
        power *= tau;
      }
      Y.row(r) = theta[lo + r].transpose();
    }
    const Mat coeffs = V.colPivHouseholderQr().solve(Y);
    first[i] = coeffs.row(1).transpose() / scale;
    second[i] = 2.0 * coeffs.row(2).transpose() / (scale * scale);
  }
  return {std::move(first), std::move(second)};
}

}  // namespace dlo
