#pragma once

#include <string>
#include <vector>

#include "dlo/model.hpp"

namespace dlo::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

struct Polyline {
  std::string label;
  std::vector<Point2> points;
  std::string color = "#1f77b4";
};

/// Equal-aspect plot of object backbones with a cross at `goal`.
std::string shape_overlay(const std::string& title, const std::vector<Polyline>& curves, const Point2& goal);

/// Cell colours from `values` (row-major, ys ascending); NaN cells are grey.
std::string heatmap(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values, const std::string& unit);

}  // namespace dlo::svg
