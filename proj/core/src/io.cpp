#include "dlo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace dlo::io {

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double optional_number(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? number_field(j, key) : fallback;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line) + ": '" + text + "' is not a number");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v)) {
    throw FormatError("line " + std::to_string(line) + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

nlohmann::json vec_json(const Vec& v) {
  auto arr = nlohmann::json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

ObjectParams object_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("object description must be a JSON object");
  ObjectParams p;
  p.name = j.value("name", std::string{});
  p.length = number_field(j, "L");
  p.diameter = number_field(j, "D");
  p.body_mass = number_field(j, "m_L");
  p.base_mass = optional_number(j, "m_0", 0.0);
  p.tip_mass = number_field(j, "m_1");
  p.stiffness = number_field(j, "k");
  p.damping = number_field(j, "beta");
  p.degree = j.contains("n") ? static_cast<int>(number_field(j, "n")) : 1;
  p.gravity = optional_number(j, "gravity", 9.81);
  if (!j.contains("theta_bar") || !j.at("theta_bar").is_array()) throw FormatError("missing array 'theta_bar'");
  const auto& tb = j.at("theta_bar");
  p.rest_curvature = Vec::Zero(p.shape_dofs());
  if (static_cast<int>(tb.size()) != p.shape_dofs()) throw FormatError("'theta_bar' must have n + 1 entries");
  for (int i = 0; i < p.shape_dofs(); ++i) {
    if (!tb[i].is_number()) throw FormatError("'theta_bar' entries must be numbers");
    p.rest_curvature(i) = tb[i].get<double>();
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return p;
}

nlohmann::json object_to_json(const ObjectParams& p) {
  nlohmann::json j;
  j["name"] = p.name;
  j["L"] = p.length;
  j["D"] = p.diameter;
  j["m_L"] = p.body_mass;
  j["m_0"] = p.base_mass;
  j["m_1"] = p.tip_mass;
  j["k"] = p.stiffness;
  j["beta"] = p.damping;
  j["theta_bar"] = vec_json(p.rest_curvature);
  j["n"] = p.degree;
  j["gravity"] = p.gravity;
  return j;
}

ObjectParams load_object(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open object file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return object_from_json(j);
}

std::string trajectory_csv_header(const Trajectory& traj, int shape_dofs) {
  std::string h = "t";
  for (int i = 0; i < shape_dofs; ++i) h += ",theta" + std::to_string(i);
  h += ",x,y,phi";
  for (int i = 0; i < shape_dofs; ++i) h += ",dtheta" + std::to_string(i);
  h += ",dx,dy,dphi,E_kin,E_grav,E_el,E_tot";
  if (traj.has_wrench()) h += ",Fx,Fy,tauphi";
  if (traj.has_robot()) h += ",tau1,tau2,tau3,qr1,qr2,qr3";
  return h;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  traj.validate();
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const int n1 = static_cast<int>(traj.states.front().size()) - 3;
  os << trajectory_csv_header(traj, n1) << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_number(traj.times[i]);
    for (double v : traj.states[i]) os << ',' << format_number(v);
    for (double v : traj.velocities[i]) os << ',' << format_number(v);
    const Energies& e = traj.energies[i];
    os << ',' << format_number(e.kinetic) << ',' << format_number(e.gravitational) << ','
       << format_number(e.elastic) << ',' << format_number(e.total());
    if (traj.has_wrench()) {
      for (double v : traj.wrench[i]) os << ',' << format_number(v);
    }
    if (traj.has_robot()) {
      for (double v : traj.torques[i]) os << ',' << format_number(v);
      for (double v : traj.joints[i]) os << ',' << format_number(v);
    }
    os << '\n';
  }
}

std::vector<MarkerFrame> read_markers_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<MarkerFrame> frames;
  while (std::getline(is, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "t,psx,psy,pmx,pmy,pex,pey") {
        throw FormatError("marker CSV header must be t,psx,psy,pmx,pmy,pex,pey");
      }
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw FormatError("line " + std::to_string(line_no) + ": expected 7 columns");
    double v[7];
    for (int c = 0; c < 7; ++c) v[c] = parse_cell(cells[c], line_no);
    frames.push_back({v[0], {Point2(v[1], v[2]), Point2(v[3], v[4]), Point2(v[5], v[6])}});
  }
  if (frames.empty()) throw FormatError("marker CSV has no data rows");
  return frames;
}

std::vector<MarkerFrame> load_markers_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open marker file " + path.string());
  return read_markers_csv(in);
}

void write_markers_csv(std::ostream& os, const std::vector<MarkerFrame>& frames) {
  os << "t,psx,psy,pmx,pmy,pex,pey\n";
  for (const auto& f : frames) {
    os << format_number(f.t);
    for (const Point2* pt : {&f.markers.start, &f.markers.mid, &f.markers.end}) {
      os << ',' << format_number(pt->x()) << ',' << format_number(pt->y());
    }
    os << '\n';
  }
}

nlohmann::json identification_report_to_json(const IdentificationReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["theta_bar"] = vec_json(report.theta_bar);
  j["beta"] = report.beta ? nlohmann::json(*report.beta) : nlohmann::json(nullptr);
  j["residual_static"] = report.residual_static;
  j["residual_dynamic"] = report.residual_dynamic ? nlohmann::json(*report.residual_dynamic) : nlohmann::json(nullptr);
  j["n_samples"] = report.n_samples;
  return j;
}

nlohmann::json plan_to_json(const PlanSolution& plan) {
  nlohmann::json j;
  j["x_star"] = plan.x_star;
  j["y_star"] = plan.y_star;
  j["phi_star"] = plan.phi_star;
  j["theta_star"] = vec_json(plan.theta_star);
  j["predicted_endpoint"] = {plan.predicted_endpoint.x(), plan.predicted_endpoint.y()};
  j["predicted_tip_angle"] = plan.predicted_tip_angle;
  j["cost"] = plan.cost;
  j["equilibrium_residual"] = plan.equilibrium_residual;
  return j;
}

PlanSolution plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("plan must be a JSON object");
  PlanSolution s;
  s.x_star = number_field(j, "x_star");
  s.y_star = number_field(j, "y_star");
  s.phi_star = number_field(j, "phi_star");
  s.predicted_tip_angle = optional_number(j, "predicted_tip_angle", 0.0);
  s.cost = optional_number(j, "cost", 0.0);
  s.equilibrium_residual = optional_number(j, "equilibrium_residual", 0.0);
  if (!j.contains("theta_star") || !j.at("theta_star").is_array()) throw FormatError("missing array 'theta_star'");
  const auto& th = j.at("theta_star");
  s.theta_star.resize(static_cast<Eigen::Index>(th.size()));
  for (std::size_t i = 0; i < th.size(); ++i) {
    if (!th[i].is_number()) throw FormatError("'theta_star' entries must be numbers");
    s.theta_star(static_cast<Eigen::Index>(i)) = th[i].get<double>();
  }
  if (j.contains("predicted_endpoint")) {
    const auto& e = j.at("predicted_endpoint");
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw FormatError("'predicted_endpoint' must be a pair of numbers");
    }
    s.predicted_endpoint = Point2(e[0].get<double>(), e[1].get<double>());
  }
  return s;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place: " + path.string() + ": " + ec.message());
  }
}

}  // namespace dlo::io
