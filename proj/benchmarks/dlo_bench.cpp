#include <benchmark/benchmark.h>

#include <numbers>

#include "dlo/control.hpp"
#include "dlo/dynamics.hpp"
#include "dlo/experiment.hpp"
#include "dlo/identify.hpp"
#include "dlo/io.hpp"
#include "dlo/plan.hpp"

namespace {

using namespace dlo;

ObjectParams object(const char* name) {
  return io::load_object(std::filesystem::path(DLO_DATA_DIR) / "objects" / (std::string(name) + ".json"));
}

Vec sample_config(const ObjectParams& p) {
  Vec q(p.dofs());
  q << 0.4, -0.7, 0.1, 0.2, 0.3;
  return q;
}

void BM_FkPoint(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec q = sample_config(p);
  for (auto _ : state) benchmark::DoNotOptimize(fk_point(q, p, 1.0, 0.0));
}
BENCHMARK(BM_FkPoint);

void BM_FkJacobian(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec q = sample_config(p);
  for (auto _ : state) benchmark::DoNotOptimize(fk_jacobian(q, p, 1.0, 0.0));
}
BENCHMARK(BM_FkJacobian);

void BM_MassMatrix(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec q = sample_config(p);
  for (auto _ : state) benchmark::DoNotOptimize(mass_matrix(q, p));
}
BENCHMARK(BM_MassMatrix);

void BM_FloatingBaseAccel(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec q = sample_config(p);
  const Vec qdot = Vec::Constant(p.dofs(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(floating_base_accel(q, qdot, Wrench::Zero(), p));
}
BENCHMARK(BM_FloatingBaseAccel);

void BM_ZeroDynamicsAccel(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec theta = sample_config(p).head(p.shape_dofs());
  const Vec thetadot = Vec::Constant(p.shape_dofs(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(zero_dynamics_accel(theta, thetadot, 0.5, p));
}
BENCHMARK(BM_ZeroDynamicsAccel);

void BM_CoupledAccel(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const RobotModel robot;
  const Vec q_r = Eigen::Vector3d(0.3, -0.6, 0.5);
  const Vec theta = sample_config(p).head(p.shape_dofs());
  const Vec rates = Vec::Constant(3, 0.2);
  const Vec thetadot = Vec::Constant(p.shape_dofs(), 0.3);
  const Eigen::Vector3d tau = Eigen::Vector3d::Zero();
  for (auto _ : state) benchmark::DoNotOptimize(coupled_accel(q_r, theta, rates, thetadot, tau, robot, p));
}
BENCHMARK(BM_CoupledAccel);

void BM_NumericalIk(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const Vec q = sample_config(p);
  const MarkerSet markers = markers_at(q, p);
  const Vec start = q + Vec::Constant(p.dofs(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(numerical_ik(markers, start, p));
}
BENCHMARK(BM_NumericalIk);

void BM_PlanPosition(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const FeasibleSet feasible = FeasibleSet::position_default();
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_position({Point2(0.4, 0.2), std::nullopt}, p, feasible));
  }
  state.SetLabel("includes branch construction");
}
BENCHMARK(BM_PlanPosition)->Unit(benchmark::kMillisecond);

void BM_PlanPositionReused(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  const EquilibriumPlanner planner(p, FeasibleSet::position_default());
  for (auto _ : state) benchmark::DoNotOptimize(planner.plan_position({Point2(0.4, 0.2), std::nullopt}));
}
BENCHMARK(BM_PlanPositionReused)->Unit(benchmark::kMicrosecond);

void BM_WorkspaceSweep(benchmark::State& state) {
  const ObjectParams p = object("ob1");
  SweepOptions options;
  options.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(workspace_sweep(p, p, GridSpec{}, options));
}
BENCHMARK(BM_WorkspaceSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ClosedLoopSecond(benchmark::State& state) {
  const ObjectParams p = object("ob4");
  const PlanSolution plan = plan_position({Point2(0.1, 0.0), std::nullopt}, p, FeasibleSet::position_default());
  const RobotModel robot;
  ClosedLoopOptions options;
  options.horizon = 1.0;
  options.initial = hanging_start(Point2(0.2, 0.2), robot, p);
  for (auto _ : state) benchmark::DoNotOptimize(closed_loop_sim(plan, robot, p, Gains{}, options));
  state.SetLabel("1 s simulated");
}
BENCHMARK(BM_ClosedLoopSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
