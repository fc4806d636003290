#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dlo/control.hpp"
#include "dlo/identify.hpp"
#include "dlo/io.hpp"
#include "dlo/plan.hpp"

namespace dlo {

// --- synthetic data -------------------------------------------------------------

/// The 23 base orientations -11pi/12 ... 11pi/12 used for static identification.
std::vector<double> static_protocol_angles();

/// Settled equilibria of `plant` at each angle.
std::vector<EquilibriumSample> synthetic_equilibria(const ObjectParams& plant, std::span<const double> phis);

/// Multiplies every theta* entry by (1 + rel * N(0, 1)).
void perturb_equilibria(std::vector<EquilibriumSample>& samples, double rel, std::mt19937_64& rng);

struct DropOptions {
  double phi = 0.7853981633974483;  // base orientation after the release
  double duration = 10.0;
  double sample_dt = 0.01;
};

/// Object settled at phi = 0, base then held at `phi` and released.
Trajectory pendulum_drop(const ObjectParams& plant, const DropOptions& options = {});

/// Shape series of a fixed-base trajectory with derivatives taken from the
/// model itself (exact up to the integrator).
ShapeSeries exact_shape_series(const Trajectory& traj, const ObjectParams& plant);

/// Marker frames of every trajectory sample, optionally with uniform noise
/// of half-width `noise` on every coordinate.
std::vector<io::MarkerFrame> trajectory_markers(const Trajectory& traj, const ObjectParams& p, double noise,
                                                std::mt19937_64& rng);

/// One marker frame per equilibrium (t = index), base at the origin.
std::vector<io::MarkerFrame> equilibrium_markers(std::span<const EquilibriumSample> samples, const ObjectParams& p,
                                                 double noise, std::mt19937_64& rng);

// --- identification pipeline -------------------------------------------------------

/// Starting configuration for numerical_ik read off the markers.
Vec marker_seed(const MarkerSet& m, const ObjectParams& p);

/// k and theta_bar from static marker frames (one equilibrium per frame),
/// then beta from an optional fixed-base drop recording. `p` supplies the
/// measurable parameters.
IdentificationReport identify_from_markers(std::span<const io::MarkerFrame> static_frames,
                                           std::span<const io::MarkerFrame> dynamic_frames, const ObjectParams& p,
                                           const IkOptions& ik = {});

// --- workspace sweep ------------------------------------------------------------

struct GridSpec {
  double x_min = -0.7;
  double x_max = 0.7;
  double y_min = 0.05;
  double y_max = 0.75;
  double spacing = 0.1;

  void validate() const;
  std::vector<double> xs() const;
  std::vector<double> ys() const;
};

enum class PlantEvaluation { equilibrium, closed_loop };

struct SweepOptions {
  FeasibleSet feasible = FeasibleSet::position_default();
  PlannerOptions planner{};
  PlantEvaluation evaluation = PlantEvaluation::equilibrium;
  int jobs = 1;
  RobotModel robot{};
  Gains gains{};
  ClosedLoopOptions closed_loop{};
};

struct SweepCell {
  Point2 goal = Point2::Zero();
  PlanSolution model;
  PlanSolution baseline;
  Point2 model_endpoint = Point2::Zero();     // achieved by the plant
  Point2 baseline_endpoint = Point2::Zero();
  double model_error = 0.0;
  double baseline_error = 0.0;
  std::string failure;  // non-empty when the cell could not be evaluated
};

struct SweepResult {
  GridSpec grid;
  std::vector<SweepCell> cells;  // row-major, y ascending then x ascending
  double model_mean = 0.0;
  double baseline_mean = 0.0;
  std::size_t evaluated = 0;

  /// 1 - model_mean / baseline_mean.
  double reduction() const;
};

/// Plans every grid goal with the model-based planner and the constant
/// offset baseline, then evaluates both on `plant`.
SweepResult workspace_sweep(const ObjectParams& model, const ObjectParams& plant, const GridSpec& grid,
                            const SweepOptions& options = {});

void write_sweep_csv(std::ostream& os, const SweepResult& result);

struct OrientationCell {
  double psi_goal = 0.0;
  PlanSolution plan;
  Point2 achieved_endpoint = Point2::Zero();
  double achieved_psi = 0.0;
  double position_error = 0.0;
  double psi_error = 0.0;
  std::string failure;
};

/// Goals -pi/2 ... pi/2 in steps of `step`.
std::vector<double> orientation_goals(double step = 0.2617993877991494);

std::vector<OrientationCell> orientation_sweep(const ObjectParams& model, const ObjectParams& plant,
                                               const Point2& p_star, std::span<const double> psi_goals,
                                               const PlannerOptions& options = {}, int jobs = 1);

void write_orientation_csv(std::ostream& os, std::span<const OrientationCell> cells);

}  // namespace dlo
