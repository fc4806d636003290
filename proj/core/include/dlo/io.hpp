#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlo/identify.hpp"
#include "dlo/integrate.hpp"
#include "dlo/model.hpp"
#include "dlo/plan.hpp"

namespace dlo::io {

/// Raised for malformed input files (missing fields, bad numbers, empty CSV).
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- ObjectParams JSON (fields L, D, m_L, m_0, m_1, k, beta, theta_bar, n, gravity)

ObjectParams object_from_json(const nlohmann::json& j);
nlohmann::json object_to_json(const ObjectParams& p);
ObjectParams load_object(const std::filesystem::path& path);

// --- Trajectory CSV

std::string trajectory_csv_header(const Trajectory& traj, int shape_dofs);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// --- Marker CSV (t,psx,psy,pmx,pmy,pex,pey)

struct MarkerFrame {
  double t = 0.0;
  MarkerSet markers;
};

std::vector<MarkerFrame> read_markers_csv(std::istream& is);
std::vector<MarkerFrame> load_markers_csv(const std::filesystem::path& path);
void write_markers_csv(std::ostream& os, const std::vector<MarkerFrame>& frames);

// --- Reports

nlohmann::json identification_report_to_json(const IdentificationReport& report);
nlohmann::json plan_to_json(const PlanSolution& plan);
PlanSolution plan_from_json(const nlohmann::json& j);

/// Writes `contents` to a sibling temporary file, then renames it over
/// `path`, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Fixed-width decimal with 12 significant digits, the CSV number format.
std::string format_number(double value);

}  // namespace dlo::io
