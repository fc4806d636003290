#include "dlo/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "dlo/errors.hpp"

namespace dlo {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

// State layout: q (n), qdot (n), input work, dissipated energy.
struct Rhs {
  const MechanicalSystem& system;
  int n;

  void operator()(const State& x, State& dxdt, double t) const {
    const Eigen::Map<const Vec> q(x.data(), n);
    const Eigen::Map<const Vec> qdot(x.data() + n, n);
    const Vec qv = q;
    const Vec qdv = qdot;
    const auto [qdd, power] = system.derivatives(t, qv, qdv);
    for (int i = 0; i < n; ++i) {
      dxdt[i] = qdv(i);
      dxdt[n + i] = qdd(i);
    }
    dxdt[2 * n] = power;
    dxdt[2 * n + 1] = system.dissipation_power(qv, qdv);
  }
};

struct Recorder {
  const MechanicalSystem& system;
  int n;
  Trajectory& out;
  std::size_t stride = 1;
  std::size_t calls = 0;

  void operator()(const State& x, double t) {
    for (double v : x) {
      if (!std::isfinite(v)) throw StepFailure("state became non-finite", t);
    }
    if (calls++ % stride != 0) return;
    const Vec q = Eigen::Map<const Vec>(x.data(), n);
    const Vec qdot = Eigen::Map<const Vec>(x.data() + n, n);
    system.record(t, q, qdot, out);
    out.energies.push_back(system.energies(q, qdot));
    out.work_in.push_back(x[2 * n]);
    out.dissipated.push_back(x[2 * n + 1]);
  }
};

}  // namespace

void Trajectory::validate() const {
  const std::size_t n = times.size();
  auto same = [n](std::size_t m) { return m == n; };
  if (!same(states.size()) || !same(velocities.size()) || !same(energies.size())) {
    throw std::logic_error("trajectory columns have different lengths");
  }
  if ((!work_in.empty() && !same(work_in.size())) || (!dissipated.empty() && !same(dissipated.size())) ||
      (!wrench.empty() && !same(wrench.size())) || (!torques.empty() && !same(torques.size())) ||
      (!joints.empty() && !same(joints.size())) || (!joint_rates.empty() && !same(joint_rates.size()))) {
    throw std::logic_error("trajectory optional columns have different lengths");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) throw std::logic_error("trajectory times must be strictly increasing");
  }
}

// --- systems -----------------------------------------------------------------

WrenchPolicy free_base() {
  return [](double, const Vec&, const Vec&) { return Wrench::Zero().eval(); };
}

WrenchPolicy clamped_base(const ObjectParams& p) {
  return [p](double, const Vec& q, const Vec& qdot) { return clamping_wrench(q, qdot, p); };
}

FloatingBaseSystem::FloatingBaseSystem(ObjectParams p, WrenchPolicy policy)
    : params_(std::move(p)), policy_(std::move(policy)) {
  params_.validate();
}

Vec FloatingBaseSystem::acceleration(double t, const Vec& q, const Vec& qdot) const {
  return floating_base_accel(q, qdot, policy_(t, q, qdot), params_);
}

double FloatingBaseSystem::input_power(double t, const Vec& q, const Vec& qdot) const {
  return policy_(t, q, qdot).dot(qdot.tail<3>());
}

std::pair<Vec, double> FloatingBaseSystem::derivatives(double t, const Vec& q, const Vec& qdot) const {
  const Wrench w = policy_(t, q, qdot);
  return {floating_base_accel(q, qdot, w, params_), w.dot(qdot.tail<3>())};
}

double FloatingBaseSystem::dissipation_power(const Vec& q, const Vec& qdot) const {
  const int n1 = params_.shape_dofs();
  (void)q;
  return params_.damping * qdot.head(n1).dot(elasticity_matrix(params_.degree) * qdot.head(n1));
}

Energies FloatingBaseSystem::energies(const Vec& q, const Vec& qdot) const {
  return dlo::energies(q, qdot, params_);
}

void FloatingBaseSystem::record(double t, const Vec& q, const Vec& qdot, Trajectory& out) const {
  out.times.push_back(t);
  out.states.push_back(q);
  out.velocities.push_back(qdot);
  out.wrench.push_back(policy_(t, q, qdot));
}

ZeroDynamicsSystem::ZeroDynamicsSystem(ObjectParams p, double phi_star, Point2 base)
    : params_(std::move(p)), phi_star_(phi_star), base_(std::move(base)) {
  params_.validate();
}

Vec ZeroDynamicsSystem::full_config(const Vec& theta) const {
  Vec q(params_.dofs());
  q.head(params_.shape_dofs()) = theta;
  q.tail<3>() << base_.x(), base_.y(), phi_star_;
  return q;
}

Vec ZeroDynamicsSystem::acceleration(double, const Vec& theta, const Vec& thetadot) const {
  return zero_dynamics_accel(theta, thetadot, phi_star_, params_);
}

double ZeroDynamicsSystem::dissipation_power(const Vec&, const Vec& thetadot) const {
  return params_.damping * thetadot.dot(elasticity_matrix(params_.degree) * thetadot);
}

Energies ZeroDynamicsSystem::energies(const Vec& theta, const Vec& thetadot) const {
  Energies e;
  e.kinetic = 0.5 * thetadot.dot(shape_mass_matrix(theta, params_) * thetadot);
  e.gravitational = gravity_potential(full_config(theta), params_);
  e.elastic = elastic_potential(theta, params_);
  return e;
}

void ZeroDynamicsSystem::record(double t, const Vec& theta, const Vec& thetadot, Trajectory& out) const {
  out.times.push_back(t);
  out.states.push_back(full_config(theta));
  Vec v = Vec::Zero(params_.dofs());
  v.head(params_.shape_dofs()) = thetadot;
  out.velocities.push_back(v);
}

CoupledSystem::CoupledSystem(RobotModel robot, ObjectParams p, TorquePolicy policy)
    : robot_(std::move(robot)), params_(std::move(p)), policy_(std::move(policy)) {
  robot_.validate();
  params_.validate();
}

Vec CoupledSystem::acceleration(double t, const Vec& qc, const Vec& qcdot) const {
  const int n1 = params_.shape_dofs();
  return coupled_accel(qc.head<3>(), qc.tail(n1), qcdot.head<3>(), qcdot.tail(n1), policy_(t, qc, qcdot),
                       robot_, params_);
}

double CoupledSystem::input_power(double t, const Vec& qc, const Vec& qcdot) const {
  return policy_(t, qc, qcdot).dot(qcdot.head<3>());
}

std::pair<Vec, double> CoupledSystem::derivatives(double t, const Vec& qc, const Vec& qcdot) const {
  const int n1 = params_.shape_dofs();
  const Eigen::Vector3d tau = policy_(t, qc, qcdot);
  return {coupled_accel(qc.head<3>(), qc.tail(n1), qcdot.head<3>(), qcdot.tail(n1), tau, robot_, params_),
          tau.dot(qcdot.head<3>())};
}

double CoupledSystem::dissipation_power(const Vec&, const Vec& qcdot) const {
  const int n1 = params_.shape_dofs();
  double power = 0.0;
  for (int i = 0; i < 3; ++i) power += robot_.joint_damping[i] * qcdot(i) * qcdot(i);
  power += params_.damping * qcdot.tail(n1).dot(elasticity_matrix(params_.degree) * qcdot.tail(n1));
  return power;
}

Energies CoupledSystem::energies(const Vec& qc, const Vec& qcdot) const {
  return coupled_energies(qc, qcdot, robot_, params_);
}

void CoupledSystem::record(double t, const Vec& qc, const Vec& qcdot, Trajectory& out) const {
  const int n1 = params_.shape_dofs();
  const Vec q_r = qc.head<3>();
  out.times.push_back(t);
  out.states.push_back(object_config(q_r, qc.tail(n1), robot_, params_));
  Vec v(params_.dofs());
  v.head(n1) = qcdot.tail(n1);
  v.tail<3>() = end_effector_jacobian(q_r, robot_) * qcdot.head<3>();
  out.velocities.push_back(v);
  out.torques.push_back(policy_(t, qc, qcdot));
  out.joints.push_back(q_r);
  out.joint_rates.push_back(qcdot.head<3>());
}

// --- integration ---------------------------------------------------------------

Trajectory integrate(const MechanicalSystem& system, const Vec& q0, const Vec& qdot0, double duration,
                     const StepOptions& options) {
  const int n = system.dofs();
  if (q0.size() != n || qdot0.size() != n) throw std::invalid_argument("initial state dimension mismatch");
  if (!(duration > 0.0)) throw std::invalid_argument("integration span must be positive");
  if (!(options.dt > 0.0)) throw std::invalid_argument("step must be positive");
  if (options.sample_dt < 0.0) throw std::invalid_argument("sample spacing must be non-negative");

  State x(2 * n + 2, 0.0);
  for (int i = 0; i < n; ++i) {
    x[i] = q0(i);
    x[n + i] = qdot0(i);
  }
  Trajectory out;
  const Rhs rhs{system, n};

  try {
    if (options.method == StepMethod::rk4) {
      const auto steps = static_cast<std::size_t>(std::llround(duration / options.dt));
      if (steps == 0) throw std::invalid_argument("integration span shorter than one step");
      const double dt = duration / static_cast<double>(steps);
      std::size_t stride = 1;
      if (options.sample_dt > 0.0) stride = std::max<std::size_t>(1, std::llround(options.sample_dt / dt));
      Recorder recorder{system, n, out, stride};
      odeint::runge_kutta4<State> stepper;
      odeint::integrate_n_steps(stepper, rhs, x, 0.0, dt, steps, std::ref(recorder));
    } else {
      const double spacing = options.sample_dt > 0.0 ? options.sample_dt : options.dt;
      const auto count = static_cast<std::size_t>(std::ceil(duration / spacing - 1e-9));
      std::vector<double> times;
      times.reserve(count + 1);
      for (std::size_t i = 0; i < count; ++i) times.push_back(static_cast<double>(i) * spacing);
      times.push_back(duration);
      Recorder recorder{system, n, out};
      auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), std::min(options.dt, spacing),
                              std::ref(recorder));
    }
  } catch (const odeint::odeint_error& e) {
    throw StepFailure(std::string("adaptive step control failed: ") + e.what(),
                      out.times.empty() ? 0.0 : out.times.back());
  }
  out.validate();
  return out;
}

namespace {

double balance(const Trajectory& traj, std::size_t i) {
  double b = traj.energies[i].total();
  if (!traj.dissipated.empty()) b += traj.dissipated[i];
  if (!traj.work_in.empty()) b -= traj.work_in[i];
  return b;
}

}  // namespace

double energy_balance_drift(const Trajectory& traj) {
  traj.validate();
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const double e0 = balance(traj, 0);
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) worst = std::max(worst, std::abs(balance(traj, i) - e0));
  return worst / scale;
}

double max_step_balance_error(const Trajectory& traj) {
  traj.validate();
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    worst = std::max(worst, std::abs(balance(traj, i) - balance(traj, i - 1)));
  }
  return worst;
}

}  // namespace dlo
