#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlo/integrate.hpp"
#include "dlo/io.hpp"
#include "test_support.hpp"

namespace dlo {
namespace {

namespace fs = std::filesystem;

TEST(Io, ObjectJsonRoundTrip) {
  const ObjectParams p = test::fixture("ob5");
  const ObjectParams back = io::object_from_json(io::object_to_json(p));
  EXPECT_EQ(back.name, p.name);
  EXPECT_DOUBLE_EQ(back.length, p.length);
  EXPECT_DOUBLE_EQ(back.stiffness, p.stiffness);
  EXPECT_DOUBLE_EQ(back.damping, p.damping);
  EXPECT_EQ(back.rest_curvature, p.rest_curvature);
}

TEST(Io, ObjectJsonErrors) {
  nlohmann::json j = io::object_to_json(test::fixture("ob1"));
  j.erase("k");
  EXPECT_THROW(io::object_from_json(j), io::FormatError);
  j = io::object_to_json(test::fixture("ob1"));
  j["theta_bar"] = {1.0};
  EXPECT_THROW(io::object_from_json(j), io::FormatError);
  j = io::object_to_json(test::fixture("ob1"));
  j["L"] = -1.0;
  EXPECT_THROW(io::object_from_json(j), io::FormatError);
  EXPECT_THROW(io::load_object("/nonexistent/object.json"), io::FormatError);
}

TEST(Io, MarkerCsvRoundTrip) {
  std::vector<io::MarkerFrame> frames(2);
  frames[0].t = 0.0;
  frames[0].markers = {Point2(0.0, 0.0), Point2(0.01, -0.3), Point2(0.02, -0.6)};
  frames[1].t = 0.5;
  frames[1].markers = {Point2(0.1, 0.0), Point2(0.11, -0.3), Point2(0.125, -0.6)};
  std::stringstream ss;
  io::write_markers_csv(ss, frames);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "t,psx,psy,pmx,pmy,pex,pey");
  const auto back = io::read_markers_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_DOUBLE_EQ(back[1].t, 0.5);
  EXPECT_DOUBLE_EQ(back[1].markers.end.x(), 0.125);
}

TEST(Io, MarkerCsvErrors) {
  std::istringstream empty("");
  EXPECT_THROW(io::read_markers_csv(empty), io::FormatError);
  std::istringstream bad_header("t,a,b\n0,1,2\n");
  EXPECT_THROW(io::read_markers_csv(bad_header), io::FormatError);
  std::istringstream bad_number("t,psx,psy,pmx,pmy,pex,pey\n0,1,2,x,4,5,6\n");
  EXPECT_THROW(io::read_markers_csv(bad_number), io::FormatError);
  std::istringstream short_row("t,psx,psy,pmx,pmy,pex,pey\n0,1,2\n");
  EXPECT_THROW(io::read_markers_csv(short_row), io::FormatError);
}

TEST(Io, PlanJsonRoundTrip) {
  PlanSolution s;
  s.x_star = 0.1;
  s.y_star = 0.2;
  s.phi_star = -0.3;
  s.theta_star = Vec::Constant(2, 0.7);
  s.predicted_endpoint = Point2(0.4, 0.5);
  s.cost = 1e-9;
  const PlanSolution back = io::plan_from_json(io::plan_to_json(s));
  EXPECT_DOUBLE_EQ(back.phi_star, s.phi_star);
  EXPECT_EQ(back.theta_star, s.theta_star);
  EXPECT_EQ(back.predicted_endpoint, s.predicted_endpoint);
}

TEST(Io, TrajectoryCsvHasOneRowPerSample) {
  const ObjectParams p = test::fixture("ob1");
  const FloatingBaseSystem system(p, clamped_base(p));
  const Trajectory traj = integrate(system, Vec::Zero(p.dofs()), Vec::Zero(p.dofs()), 0.1, {StepMethod::rk4, 1e-2});
  std::ostringstream os;
  io::write_trajectory_csv(os, traj);
  const std::string text = os.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), traj.size() + 1);
  EXPECT_EQ(text.rfind("t,", 0), 0u);
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  const fs::path dir = fs::temp_directory_path() / "dlo_io_test";
  fs::create_directories(dir);
  const fs::path file = dir / "out.csv";
  io::write_file_atomic(file, "first\n");
  io::write_file_atomic(file, "second\n");
  std::ifstream in(file);
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(contents, "second\n");
  for (const auto& entry : fs::directory_iterator(dir)) EXPECT_EQ(entry.path().filename(), "out.csv");
  fs::remove_all(dir);
}

TEST(Io, NumbersRoundTripAtTwelveDigits) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_NEAR(std::stod(io::format_number(1.0 / 3.0)), 1.0 / 3.0, 1e-12);
}

}  // namespace
}  // namespace dlo
