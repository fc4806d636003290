#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dlo/integrate.hpp"
#include "dlo/model.hpp"

namespace dlo {

/// Marker positions at s = 0, 0.5, 1 (d = 0), base frame.
struct MarkerSet {
  Point2 start = Point2::Zero();
  Point2 mid = Point2::Zero();
  Point2 end = Point2::Zero();

  /// Pairwise distances must not exceed the object length by more than
  /// `slack` (relative). Throws std::invalid_argument otherwise.
  void validate(double length, double slack = 0.02) const;
};

/// Stacked marker positions (start, mid, end) predicted at configuration q.
Vec marker_positions(const Vec& q, const ObjectParams& p);
/// 6 x (n + 4) Jacobian of marker_positions.
Mat marker_jacobian(const Vec& q, const ObjectParams& p);
MarkerSet markers_at(const Vec& q, const ObjectParams& p);

struct IkOptions {
  double eps = 1e-6;       // m, stop when the marker residual norm drops below
  double delta = 0.5;      // step gain
  int max_iterations = 200;
  double damping = 1e-4;   // Tikhonov damping of the pseudoinverse
};

struct IkResult {
  Vec q;
  double residual = 0.0;
  int iterations = 0;
};

/// Damped-pseudoinverse iteration q <- q + delta J^+ (p - h(q)).
/// Throws ConvergenceFailure (with the best iterate) when the iteration cap
/// is exhausted. For n >= 3 the update is the minimum-norm one.
IkResult numerical_ik(const MarkerSet& markers, const Vec& q_init, const ObjectParams& p,
                      const IkOptions& options = {});
FloatingBaseConfig numerical_ik(const MarkerSet& markers, const FloatingBaseConfig& q_init,
                                const ObjectParams& p, const IkOptions& options = {});

struct EquilibriumSample {
  double phi = 0.0;
  Vec theta_star;
};

struct StaticFit {
  double k = 0.0;
  Vec theta_bar;
  double residual = 0.0;  // norm of the stacked regression residual
  int rank = 0;
};

/// Least-squares fit of [H theta* | -H] (k; k theta_bar) = -G_theta(theta*, phi)
/// over all samples. Throws RankDeficient when the regressor has column
/// rank below n + 2 and NonPhysical when the recovered k is not positive.
StaticFit identify_static(std::span<const EquilibriumSample> samples, const ObjectParams& p);

/// Shape evolution with the base frozen at orientation `phi`.
struct ShapeSeries {
  std::vector<double> times;
  std::vector<Vec> theta;
  std::vector<Vec> theta_dot;
  std::vector<Vec> theta_ddot;
  double phi = 0.0;
};

struct DampingFit {
  double beta = 0.0;
  double residual = 0.0;
  std::size_t samples = 0;
};

/// Scalar least-squares beta from (H thetadot) beta = -(B thetadd + C thetadot
/// + G_theta + kH(theta - theta_bar)) stacked over every sample. Uses the
/// stiffness and rest curvature already in `p`. Throws Degenerate when the
/// object never moves.
DampingFit identify_damping(const ShapeSeries& series, const ObjectParams& p);

/// Same, reading theta from a fixed-base trajectory and obtaining both
/// derivatives with differentiate_trajectory.
DampingFit identify_damping(const Trajectory& traj, const ObjectParams& p);

/// Savitzky-Golay derivatives (window 7, cubic) for possibly non-uniform
/// sample times; ends use one-sided windows. Throws std::invalid_argument
/// with fewer than 7 samples or non-increasing times.
std::pair<std::vector<Vec>, std::vector<Vec>> differentiate_trajectory(std::span<const double> times,
                                                                       std::span<const Vec> theta);

/// Output of the full identification pipeline.
struct IdentificationReport {
  double k = 0.0;
  Vec theta_bar;
  std::optional<double> beta;
  double residual_static = 0.0;
  std::optional<double> residual_dynamic;
  std::size_t n_samples = 0;
};

}  // namespace dlo
