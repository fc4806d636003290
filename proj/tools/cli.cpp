#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "dlo/control.hpp"
#include "dlo/errors.hpp"
#include "dlo/experiment.hpp"
#include "dlo/identify.hpp"
#include "dlo/integrate.hpp"
#include "dlo/io.hpp"
#include "dlo/plan.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace dlo::cli {

namespace {

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (cell.empty() || used != cell.size() || !std::isfinite(v)) {
      throw std::invalid_argument(what + ": '" + text + "' is not a list of " + std::to_string(count) + " numbers");
    }
    out.push_back(v);
  }
  if (out.size() != count) {
    throw std::invalid_argument(what + ": expected " + std::to_string(count) + " comma-separated numbers");
  }
  return out;
}

Point2 parse_point(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, 2, what);
  return {v[0], v[1]};
}

fs::path default_output_dir() {
  const char* env = std::getenv("DLO_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

struct Output {
  fs::path dir;

  void write(const std::string& name, const std::string& contents) const {
    fs::create_directories(dir);
    io::write_file_atomic(dir / name, contents);
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
};

std::vector<Point2> backbone(const Vec& q, const ObjectParams& p, int samples = 41) {
  std::vector<Point2> out;
  for (int i = 0; i < samples; ++i) out.push_back(fk_point(q, p, static_cast<double>(i) / (samples - 1), 0.0));
  return out;
}

std::string energy_chart(const std::string& title, const Trajectory& traj) {
  svg::Series total{"E + D - W", {}, {}, "#1f77b4"};
  svg::Series kinetic{"kinetic", {}, {}, "#2ca02c"};
  svg::Series potential{"potential", {}, {}, "#ff7f0e"};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Energies& e = traj.energies[i];
    double b = e.total();
    if (!traj.dissipated.empty()) b += traj.dissipated[i];
    if (!traj.work_in.empty()) b -= traj.work_in[i];
    total.x.push_back(traj.times[i]);
    total.y.push_back(b);
    kinetic.x.push_back(traj.times[i]);
    kinetic.y.push_back(e.kinetic);
    potential.x.push_back(traj.times[i]);
    potential.y.push_back(e.gravitational + e.elastic);
  }
  return svg::line_chart(title, "t [s]", "energy [J]", {total, kinetic, potential});
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  io::write_trajectory_csv(os, traj);
  return os.str();
}

void print_plan(const PlanSolution& s) {
  std::cout << "base x* " << io::format_number(s.x_star) << " y* " << io::format_number(s.y_star) << " phi* "
            << io::format_number(s.phi_star) << '\n';
  std::cout << "predicted endpoint " << io::format_number(s.predicted_endpoint.x()) << ','
            << io::format_number(s.predicted_endpoint.y()) << " tip angle "
            << io::format_number(s.predicted_tip_angle) << '\n';
  std::cout << "cost " << io::format_number(s.cost) << '\n';
}

Vec plan_config(const PlanSolution& s) {
  Vec q(s.theta_star.size() + 3);
  q.head(s.theta_star.size()) = s.theta_star;
  q.tail<3>() << s.x_star, s.y_star, s.phi_star;
  return q;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string object;
  std::string init = "hang";
  double phi = std::numbers::pi / 4;
  std::string base = "0,0";
  double t = 5.0;
  double dt = 1e-3;
  double sample = 0.01;
  std::string method = "rk4";
  bool beta0 = false;
  bool free = false;
};

int simulate(const SimulateArgs& a, const Output& out) {
  if (!(a.t > 0.0)) throw std::invalid_argument("--t must be positive");
  if (!(a.dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  ObjectParams p = io::load_object(a.object);
  if (a.beta0) p.damping = 0.0;
  const Point2 base = parse_point(a.base, "--base");

  Vec q(p.dofs());
  q.head(p.shape_dofs()) = a.init == "hang" ? settled_equilibrium(0.0, p).theta : p.rest_curvature;
  q.tail<3>() << base.x(), base.y(), a.phi;
  const FloatingBaseSystem system(p, a.free ? free_base() : clamped_base(p));

  StepOptions step;
  step.method = a.method == "rk45" ? StepMethod::rk45 : StepMethod::rk4;
  step.dt = a.dt;
  step.sample_dt = a.sample;
  const Trajectory traj = integrate(system, q, Vec::Zero(p.dofs()), a.t, step);

  out.write("simulate.csv", trajectory_csv(traj));
  out.write("simulate_energy.svg", energy_chart(p.name + " energy audit", traj));
  std::cout << "energy drift " << io::format_number(energy_balance_drift(traj)) << '\n';
  std::cout << "max step balance error " << io::format_number(max_step_balance_error(traj)) << '\n';
  return 0;
}

// --- identify / ik ------------------------------------------------------------

struct IdentifyArgs {
  std::string object;
  std::string static_csv;
  std::string dynamic_csv;
};

int identify(const IdentifyArgs& a, const Output& out) {
  const ObjectParams p = io::load_object(a.object);
  const auto frames = io::load_markers_csv(a.static_csv);
  std::vector<io::MarkerFrame> dynamic;
  if (!a.dynamic_csv.empty()) dynamic = io::load_markers_csv(a.dynamic_csv);
  const IdentificationReport r = identify_from_markers(frames, dynamic, p);

  std::cout << "k " << io::format_number(r.k) << '\n' << "theta_bar";
  for (double v : r.theta_bar) std::cout << ' ' << io::format_number(v);
  std::cout << '\n' << "static residual " << io::format_number(r.residual_static) << '\n';
  if (r.beta) {
    std::cout << "beta " << io::format_number(*r.beta) << '\n'
              << "dynamic residual " << io::format_number(r.residual_dynamic.value_or(0.0)) << '\n';
  }
  out.write("identification.json", io::identification_report_to_json(r).dump(2) + "\n");
  return 0;
}

struct IkArgs {
  std::string object;
  std::string markers;
};

int ik(const IkArgs& a, const Output& out) {
  const ObjectParams p = io::load_object(a.object);
  const auto frames = io::load_markers_csv(a.markers);
  std::ostringstream os;
  os << 't';
  for (int i = 0; i < p.shape_dofs(); ++i) os << ",theta" << i;
  os << ",x,y,phi,residual,iterations\n";
  Vec q = marker_seed(frames.front().markers, p);
  double worst = 0.0;
  for (const auto& f : frames) {
    f.markers.validate(p.length);
    IkResult r;
    try {
      r = numerical_ik(f.markers, marker_seed(f.markers, p), p);
    } catch (const ConvergenceFailure&) {
      r = numerical_ik(f.markers, q, p);
    }
    q = r.q;
    worst = std::max(worst, r.residual);
    os << io::format_number(f.t);
    for (Eigen::Index i = 0; i < r.q.size(); ++i) {
      os << ',' << io::format_number(i == phi_index(p) ? wrap_angle(r.q(i)) : r.q(i));
    }
    os << ',' << io::format_number(r.residual) << ',' << r.iterations << '\n';
  }
  out.write("ik.csv", os.str());
  std::cout << "frames " << frames.size() << " max residual " << io::format_number(worst) << '\n';
  return 0;
}

// --- plan -------------------------------------------------------------------

struct FeasibleArgs {
  std::string disk_center = "0,0.333";
  double disk_radius = 0.5;
  bool no_disk = false;
  std::string phi_range = "-2.356194490192345,2.356194490192345";

  FeasibleSet build(bool orientation) const {
    FeasibleSet f = orientation ? FeasibleSet::orientation_default() : FeasibleSet::position_default();
    if (!orientation) {
      f.disk_center = parse_point(disk_center, "--disk-center");
      f.disk_radius = disk_radius;
      if (no_disk) f.disk_radius.reset();
    }
    const auto r = parse_list(phi_range, 2, "--phi-range");
    f.phi_min = r[0];
    f.phi_max = r[1];
    f.validate();
    return f;
  }
};

struct PlanArgs {
  std::string object;
  std::string goal;
  std::optional<double> psi;
  FeasibleArgs feasible;
};

int plan(const PlanArgs& a, bool orientation, const Output& out) {
  const ObjectParams p = io::load_object(a.object);
  TaskGoal goal{parse_point(a.goal, "--goal"), std::nullopt};
  if (orientation) {
    if (!a.psi) throw std::invalid_argument("orientation planning needs --psi");
    goal.psi_star = *a.psi;
  }
  const FeasibleSet feasible = a.feasible.build(orientation);
  const PlanSolution s = orientation ? plan_orientation(goal, p, feasible) : plan_position(goal, p, feasible);
  print_plan(s);
  out.write("plan.json", io::plan_to_json(s).dump(2) + "\n");
  const svg::Polyline curve{p.name + " equilibrium", backbone(plan_config(s), p), "#1f77b4"};
  out.write("plan.svg", svg::shape_overlay(p.name + " plan", {curve}, goal.p_star));
  return 0;
}

// --- closed loop --------------------------------------------------------------

struct ClosedLoopArgs {
  std::string object;
  std::string plant;
  std::string plan_file;
  std::string goal;
  std::string start;
  double horizon = 20.0;
  double dt = 1e-4;
  bool beta0 = false;
  bool no_compensation = false;
};

int closed_loop(const ClosedLoopArgs& a, const Output& out) {
  if (!(a.horizon > 0.0)) throw std::invalid_argument("--horizon must be positive");
  const ObjectParams model = io::load_object(a.object);
  ObjectParams plant = a.plant.empty() ? model : io::load_object(a.plant);
  if (a.beta0) plant.damping = 0.0;

  PlanSolution s;
  if (!a.plan_file.empty()) {
    std::ifstream in(a.plan_file);
    if (!in) throw io::FormatError("cannot open plan file " + a.plan_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw io::FormatError(a.plan_file + ": " + e.what());
    }
    s = io::plan_from_json(j);
  } else if (!a.goal.empty()) {
    s = plan_position({parse_point(a.goal, "--goal"), std::nullopt}, model, FeasibleSet::position_default());
  } else {
    throw std::invalid_argument("closed-loop needs --plan or --goal");
  }
  if (s.theta_star.size() != plant.shape_dofs()) throw std::invalid_argument("plan does not match the object degree");

  const RobotModel robot;
  ClosedLoopOptions options;
  options.horizon = a.horizon;
  options.step.dt = a.dt;
  options.compensate_object = !a.no_compensation;
  if (!a.start.empty()) options.initial = hanging_start(parse_point(a.start, "--start"), robot, plant);

  const auto [traj, report] = closed_loop_sim(s, robot, plant, Gains{}, options);
  std::cout << "settled " << (report.settled ? "yes" : "no");
  if (report.settled) std::cout << " at t " << io::format_number(report.settle_time);
  std::cout << '\n'
            << "joint error " << io::format_number(report.final_joint_error) << '\n'
            << "endpoint error " << io::format_number(report.final_endpoint_error) << '\n';

  nlohmann::json j;
  j["settled"] = report.settled;
  j["settle_time"] = report.settle_time;
  j["final_joint_error"] = report.final_joint_error;
  j["final_endpoint_error"] = report.final_endpoint_error;
  j["energy_monotone_after"] = report.energy_monotone_after;
  j["q_r_star"] = {report.q_r_star(0), report.q_r_star(1), report.q_r_star(2)};
  j["plan"] = io::plan_to_json(s);
  out.write("closed_loop.csv", trajectory_csv(traj));
  out.write("closed_loop.json", j.dump(2) + "\n");
  out.write("closed_loop_energy.svg", energy_chart(plant.name + " closed loop", traj));

  const svg::Polyline planned{"plan", backbone(plan_config(s), model), "#1f77b4"};
  const svg::Polyline final_shape{"final", backbone(traj.states.back(), plant), "#2ca02c"};
  out.write("closed_loop_shape.svg", svg::shape_overlay(plant.name + " closed loop", {planned, final_shape},
                                                        s.predicted_endpoint));
  return 0;
}

// --- sweeps -----------------------------------------------------------------

struct SweepArgs {
  std::string object;
  std::string plant;
  int jobs = 1;
  std::string eval = "equilibrium";
  std::string grid = "-0.7,0.7,0.05,0.75,0.1";
  std::string goal = "0,0.4";
  double step = std::numbers::pi / 12;
};

std::string sweep_errors_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "gx,gy,model_x,model_y,model_err,baseline_x,baseline_y,baseline_err,status\n";
  for (const auto& c : r.cells) {
    os << io::format_number(c.goal.x()) << ',' << io::format_number(c.goal.y());
    if (!c.failure.empty()) {
      os << ",nan,nan,nan,nan,nan,nan,failed\n";
      continue;
    }
    for (double v : {c.model_endpoint.x(), c.model_endpoint.y(), c.model_error, c.baseline_endpoint.x(),
                     c.baseline_endpoint.y(), c.baseline_error}) {
      os << ',' << io::format_number(v);
    }
    os << ",ok\n";
  }
  return os.str();
}

int sweep_position(const SweepArgs& a, const Output& out) {
  if (a.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
  const ObjectParams model = io::load_object(a.object);
  const ObjectParams plant = a.plant.empty() ? model : io::load_object(a.plant);
  const auto g = parse_list(a.grid, 5, "--grid");
  const GridSpec grid{g[0], g[1], g[2], g[3], g[4]};
  grid.validate();

  SweepOptions options;
  options.jobs = a.jobs;
  options.evaluation = a.eval == "closed-loop" ? PlantEvaluation::closed_loop : PlantEvaluation::equilibrium;
  const SweepResult r = workspace_sweep(model, plant, grid, options);

  std::ostringstream csv;
  write_sweep_csv(csv, r);
  out.write("sweep.csv", csv.str());
  out.write("sweep_errors.csv", sweep_errors_csv(r));
  std::vector<double> model_mm;
  std::vector<double> baseline_mm;
  for (const auto& c : r.cells) {
    const bool ok = c.failure.empty();
    model_mm.push_back(ok ? 1e3 * c.model_error : std::nan(""));
    baseline_mm.push_back(ok ? 1e3 * c.baseline_error : std::nan(""));
  }
  out.write("sweep_heatmap.svg",
            svg::heatmap(model.name + " model-based endpoint error", grid.xs(), grid.ys(), model_mm, "mm"));
  out.write("sweep_baseline_heatmap.svg",
            svg::heatmap(model.name + " baseline endpoint error", grid.xs(), grid.ys(), baseline_mm, "mm"));

  std::cout << "cells " << r.cells.size() << " evaluated " << r.evaluated << '\n'
            << "model-based mean error " << io::format_number(r.model_mean) << " m\n"
            << "baseline mean error " << io::format_number(r.baseline_mean) << " m\n"
            << "reduction " << io::format_number(100.0 * r.reduction()) << " %\n";
  return 0;
}

int sweep_orientation(const SweepArgs& a, const Output& out) {
  if (a.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
  const ObjectParams model = io::load_object(a.object);
  const ObjectParams plant = a.plant.empty() ? model : io::load_object(a.plant);
  const Point2 goal = parse_point(a.goal, "--goal");
  const auto psis = orientation_goals(a.step);
  const auto cells = orientation_sweep(model, plant, goal, psis, {}, a.jobs);

  std::ostringstream csv;
  write_orientation_csv(csv, cells);
  out.write("orientation.csv", csv.str());
  svg::Series achieved{"achieved", {}, {}, "#1f77b4"};
  svg::Series target{"goal", {}, {}, "#d62728"};
  double worst_pos = 0.0;
  double worst_psi = 0.0;
  std::size_t failed = 0;
  for (const auto& c : cells) {
    if (!c.failure.empty()) {
      ++failed;
      continue;
    }
    achieved.x.push_back(c.psi_goal);
    achieved.y.push_back(c.achieved_psi);
    target.x.push_back(c.psi_goal);
    target.y.push_back(c.psi_goal);
    worst_pos = std::max(worst_pos, c.position_error);
    worst_psi = std::max(worst_psi, c.psi_error);
  }
  out.write("orientation.svg",
            svg::line_chart(model.name + " tip angle", "goal psi [rad]", "psi [rad]", {target, achieved}));
  std::cout << "goals " << cells.size() << " failed " << failed << '\n'
            << "max position error " << io::format_number(worst_pos) << " m\n"
            << "max tip angle error " << io::format_number(worst_psi) << " rad\n";
  return 0;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string object;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double rate = 30.0;
  double duration = 10.0;
};

int synth(const SynthArgs& a, const Output& out) {
  if (a.noise < 0.0) throw std::invalid_argument("--noise must be non-negative");
  if (!(a.rate > 0.0)) throw std::invalid_argument("--rate must be positive");
  const ObjectParams p = io::load_object(a.object);
  std::mt19937_64 rng(a.seed);
  const auto angles = static_protocol_angles();
  const auto samples = synthetic_equilibria(p, angles);
  std::ostringstream st;
  io::write_markers_csv(st, equilibrium_markers(samples, p, a.noise, rng));
  out.write("static_markers.csv", st.str());

  DropOptions drop;
  drop.duration = a.duration;
  drop.sample_dt = 1.0 / a.rate;
  const Trajectory traj = pendulum_drop(p, drop);
  std::ostringstream dy;
  io::write_markers_csv(dy, trajectory_markers(traj, p, a.noise, rng));
  out.write("drop_markers.csv", dy.str());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Shape planning and simulation for deformable linear objects"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir = default_output_dir().string();
  app.add_option("--out", out_dir, "Output directory (default: $DLO_OUTPUT_DIR or .)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Floating-base simulation from rest");
  c_sim->add_option("--object", sim.object, "Object parameter JSON")->required();
  c_sim->add_option("--init", sim.init, "hang: phi = 0 equilibrium shape, rest: theta_bar")
      ->check(CLI::IsMember({"hang", "rest"}));
  c_sim->add_option("--phi", sim.phi, "Base orientation at t = 0 [rad]");
  c_sim->add_option("--base", sim.base, "Base position x,y [m]");
  c_sim->add_option("--t", sim.t, "Horizon [s]");
  c_sim->add_option("--dt", sim.dt, "Step [s]");
  c_sim->add_option("--sample", sim.sample, "Output spacing [s] (0: every step)");
  c_sim->add_option("--method", sim.method, "Integrator")->check(CLI::IsMember({"rk4", "rk45"}));
  c_sim->add_flag("--beta0", sim.beta0, "Set the damping to zero");
  c_sim->add_flag("--free", sim.free, "Free base instead of clamped");

  IdentifyArgs idf;
  auto* c_id = app.add_subcommand("identify", "Identify k, theta_bar and beta from marker recordings");
  c_id->add_option("--object", idf.object, "Object JSON supplying L, D and the masses")->required();
  c_id->add_option("--static", idf.static_csv, "Marker CSV, one equilibrium per row")->required();
  c_id->add_option("--dynamic", idf.dynamic_csv, "Marker CSV of a fixed-base release");

  IkArgs ika;
  auto* c_ik = app.add_subcommand("ik", "Configurations from marker frames");
  c_ik->add_option("--object", ika.object, "Object parameter JSON")->required();
  c_ik->add_option("--markers", ika.markers, "Marker CSV")->required();

  PlanArgs pl;
  auto* c_plan = app.add_subcommand("plan", "Equilibrium-based base pose planning");
  c_plan->require_subcommand(1);
  auto* c_plan_pos = c_plan->add_subcommand("position", "Endpoint position goal");
  auto* c_plan_ori = c_plan->add_subcommand("orientation", "Endpoint position and tip angle goal");
  for (auto* c : {c_plan_pos, c_plan_ori}) {
    c->add_option("--object", pl.object, "Object parameter JSON")->required();
    c->add_option("--goal", pl.goal, "Endpoint goal x,y [m]")->required();
    c->add_option("--phi-range", pl.feasible.phi_range, "Feasible base angles lo,hi [rad]");
  }
  c_plan_pos->add_option("--disk-center", pl.feasible.disk_center, "Feasible disk centre x,y [m]");
  c_plan_pos->add_option("--disk-radius", pl.feasible.disk_radius, "Feasible disk radius [m]");
  c_plan_pos->add_flag("--no-disk", pl.feasible.no_disk, "Leave the base position unconstrained");
  c_plan_ori->add_option("--psi", pl.psi, "Tip angle goal [rad]")->required();

  ClosedLoopArgs cl;
  auto* c_cl = app.add_subcommand("closed-loop", "PD + gravity compensation on the arm holding the object");
  c_cl->add_option("--object", cl.object, "Object JSON used for planning")->required();
  c_cl->add_option("--plant", cl.plant, "Object JSON simulated (default: --object)");
  c_cl->add_option("--plan", cl.plan_file, "Plan JSON from `plan`");
  c_cl->add_option("--goal", cl.goal, "Plan a position goal x,y instead of reading --plan");
  c_cl->add_option("--start", cl.start, "Hanging start with the gripper at x,y (default: plan pose)");
  c_cl->add_option("--horizon", cl.horizon, "Horizon [s]");
  c_cl->add_option("--dt", cl.dt, "RK4 step [s]");
  c_cl->add_flag("--beta0", cl.beta0, "Simulate the plant without damping");
  c_cl->add_flag("--no-compensation", cl.no_compensation, "Compensate only the arm's own gravity");

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "Workspace and orientation sweeps");
  c_sweep->require_subcommand(1);
  auto* c_sweep_pos = c_sweep->add_subcommand("position", "Endpoint goal grid, model-based vs constant offset");
  auto* c_sweep_ori = c_sweep->add_subcommand("orientation", "Tip angle goals at a fixed endpoint");
  for (auto* c : {c_sweep_pos, c_sweep_ori}) {
    c->add_option("--object", sw.object, "Object JSON used for planning")->required();
    c->add_option("--plant", sw.plant, "Object JSON of the synthetic plant (default: --object)");
    c->add_option("--jobs", sw.jobs, "Worker threads");
  }
  c_sweep_pos->add_option("--eval", sw.eval, "Plant evaluation")
      ->check(CLI::IsMember({"equilibrium", "closed-loop"}));
  c_sweep_pos->add_option("--grid", sw.grid, "xmin,xmax,ymin,ymax,spacing [m]");
  c_sweep_ori->add_option("--goal", sw.goal, "Endpoint goal x,y [m]");
  c_sweep_ori->add_option("--step", sw.step, "Tip angle goal spacing [rad]");

  SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "Synthetic marker recordings for identify");
  c_synth->add_option("--object", sy.object, "Object parameter JSON of the plant")->required();
  c_synth->add_option("--noise", sy.noise, "Uniform marker noise half-width [m]");
  c_synth->add_option("--seed", sy.seed, "Noise seed");
  c_synth->add_option("--rate", sy.rate, "Camera rate of the release recording [Hz]");
  c_synth->add_option("--duration", sy.duration, "Release recording length [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Output out{out_dir};
  try {
    if (*c_sim) return simulate(sim, out);
    if (*c_id) return identify(idf, out);
    if (*c_ik) return ik(ika, out);
    if (*c_plan_pos) return plan(pl, false, out);
    if (*c_plan_ori) return plan(pl, true, out);
    if (*c_cl) return closed_loop(cl, out);
    if (*c_sweep_pos) return sweep_position(sw, out);
    if (*c_sweep_ori) return sweep_orientation(sw, out);
    if (*c_synth) return synth(sy, out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace dlo::cli
