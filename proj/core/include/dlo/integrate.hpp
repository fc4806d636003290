#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dlo/dynamics.hpp"

namespace dlo {

/// Time-stamped samples of a simulation. States and velocities are always
/// in floating-base form (theta, x, y, phi); the optional columns are empty
/// when the producing system does not supply them.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> velocities;
  std::vector<Energies> energies;
  std::vector<double> work_in;     // cumulative input work
  std::vector<double> dissipated;  // cumulative dissipated energy
  std::vector<Wrench> wrench;
  std::vector<Eigen::Vector3d> torques;
  std::vector<Eigen::Vector3d> joints;
  std::vector<Eigen::Vector3d> joint_rates;

  std::size_t size() const { return times.size(); }
  bool has_wrench() const { return !wrench.empty(); }
  bool has_robot() const { return !torques.empty(); }

  /// Throws std::logic_error when lengths differ or times are not increasing.
  void validate() const;
};

/// Second-order mechanical system integrated by `integrate`.
class MechanicalSystem {
 public:
  virtual ~MechanicalSystem() = default;

  virtual int dofs() const = 0;
  virtual Vec acceleration(double t, const Vec& q, const Vec& qdot) const = 0;
  /// Power injected by external inputs at (t, q, qdot).
  virtual double input_power(double t, const Vec& q, const Vec& qdot) const = 0;
  /// Acceleration and input power together; systems whose inputs are
  /// costly to evaluate override this to share the work.
  virtual std::pair<Vec, double> derivatives(double t, const Vec& q, const Vec& qdot) const {
    return {acceleration(t, q, qdot), input_power(t, q, qdot)};
  }
  /// Power removed by internal damping.
  virtual double dissipation_power(const Vec& q, const Vec& qdot) const = 0;
  virtual Energies energies(const Vec& q, const Vec& qdot) const = 0;
  /// Appends one sample (configuration, velocity and any extra columns).
  virtual void record(double t, const Vec& q, const Vec& qdot, Trajectory& out) const = 0;
};

/// Wrench applied at the grasped end as a function of (t, q, qdot).
using WrenchPolicy = std::function<Wrench(double, const Vec&, const Vec&)>;

WrenchPolicy free_base();
/// Holds the base at zero acceleration (a clamped base when started at rest).
WrenchPolicy clamped_base(const ObjectParams& p);

class FloatingBaseSystem final : public MechanicalSystem {
 public:
  FloatingBaseSystem(ObjectParams p, WrenchPolicy policy);

  int dofs() const override { return params_.dofs(); }
  Vec acceleration(double t, const Vec& q, const Vec& qdot) const override;
  double input_power(double t, const Vec& q, const Vec& qdot) const override;
  std::pair<Vec, double> derivatives(double t, const Vec& q, const Vec& qdot) const override;
  double dissipation_power(const Vec& q, const Vec& qdot) const override;
  Energies energies(const Vec& q, const Vec& qdot) const override;
  void record(double t, const Vec& q, const Vec& qdot, Trajectory& out) const override;

 private:
  ObjectParams params_;
  WrenchPolicy policy_;
};

/// Shape dynamics with the base frozen at (x, y, phi_star). The integrated
/// coordinates are theta only.
class ZeroDynamicsSystem final : public MechanicalSystem {
 public:
  ZeroDynamicsSystem(ObjectParams p, double phi_star, Point2 base = Point2::Zero());

  int dofs() const override { return params_.shape_dofs(); }
  Vec acceleration(double t, const Vec& theta, const Vec& thetadot) const override;
  double input_power(double, const Vec&, const Vec&) const override { return 0.0; }
  double dissipation_power(const Vec& theta, const Vec& thetadot) const override;
  Energies energies(const Vec& theta, const Vec& thetadot) const override;
  void record(double t, const Vec& theta, const Vec& thetadot, Trajectory& out) const override;

  Vec full_config(const Vec& theta) const;

 private:
  ObjectParams params_;
  double phi_star_;
  Point2 base_;
};

/// Joint torques as a function of (t, qc, qcdot) with qc = (q_r, theta).
using TorquePolicy = std::function<Eigen::Vector3d(double, const Vec&, const Vec&)>;

/// Robot-object system. Integrated coordinates are (q_r, theta).
class CoupledSystem final : public MechanicalSystem {
 public:
  CoupledSystem(RobotModel robot, ObjectParams p, TorquePolicy policy);

  int dofs() const override { return 3 + params_.shape_dofs(); }
  Vec acceleration(double t, const Vec& qc, const Vec& qcdot) const override;
  double input_power(double t, const Vec& qc, const Vec& qcdot) const override;
  std::pair<Vec, double> derivatives(double t, const Vec& qc, const Vec& qcdot) const override;
  double dissipation_power(const Vec& qc, const Vec& qcdot) const override;
  Energies energies(const Vec& qc, const Vec& qcdot) const override;
  void record(double t, const Vec& qc, const Vec& qcdot, Trajectory& out) const override;

 private:
  RobotModel robot_;
  ObjectParams params_;
  TorquePolicy policy_;
};

enum class StepMethod { rk4, rk45 };

struct StepOptions {
  StepMethod method = StepMethod::rk4;
  double dt = 1e-3;            // fixed step (rk4) or initial step (rk45)
  double sample_dt = 0.0;      // output spacing; 0 means every rk4 step / dt for rk45
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
};

/// Integrates from (q0, qdot0) over [0, duration]. The energy audit
/// (input work and dissipation) is integrated alongside the state.
/// Throws StepFailure when the adaptive controller cannot make progress
/// or the state becomes non-finite.
Trajectory integrate(const MechanicalSystem& system, const Vec& q0, const Vec& qdot0, double duration,
                     const StepOptions& options = {});

/// max_t |E(t) + D(t) - W(t) - E(0)| / |E(0)|, with D the dissipated energy and
/// W the input work (absolute when E(0) = 0).
double energy_balance_drift(const Trajectory& traj);

/// Largest one-sample violation |dE + dD - dW|.
double max_step_balance_error(const Trajectory& traj);

}  // namespace dlo
