#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dlo::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-12) {
      const double pad = std::max(1e-12, std::abs(lo) * 0.05 + 1e-9);
      lo -= pad;
      hi += pad;
    }
  }
};

struct Frame {
  Range x;
  Range y;
  double left = kLeft;
  double top = kTop;
  double width = kWidth - kLeft - kRight;
  double height = kHeight - kTop - kBottom;

  double px(double v) const { return left + (v - x.lo) / (x.hi - x.lo) * width; }
  double py(double v) const { return top + height - (v - y.lo) / (y.hi - y.lo) * height; }
};

void open(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& x_label, const std::string& y_label) {
  os << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.width) << "\" height=\""
     << num(f.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
    const double yv = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
    os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(f.top + f.height + 16)
       << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
       << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\"" << num(kHeight - 10)
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(f.top + f.height / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num(f.top + f.height / 2) << ")\">" << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& os, const Frame& f, const std::vector<std::pair<std::string, std::string>>& items) {
  double y = f.top + 14;
  for (const auto& [label, color] : items) {
    if (label.empty()) continue;
    os << "<line x1=\"" << num(f.left + f.width - 130) << "\" y1=\"" << num(y - 4) << "\" x2=\""
       << num(f.left + f.width - 110) << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(f.left + f.width - 104) << "\" y=\"" << num(y) << "\">" << escape(label)
       << "</text>\n";
    y += 16;
  }
}

std::string colormap(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * std::min(1.0, 2 * t)));
  const int g = static_cast<int>(std::lround(255 * (1 - std::abs(2 * t - 1)) * 0.8 + 40 * (1 - t)));
  const int b = static_cast<int>(std::lround(255 * std::min(1.0, 2 * (1 - t))));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", std::clamp(r, 0, 255), std::clamp(g, 0, 255), std::clamp(b, 0, 255));
  return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  Frame f;
  for (const auto& s : series) {
    for (double v : s.x) f.x.add(v);
    for (double v : s.y) f.y.add(v);
  }
  f.x.finish();
  f.y.finish();

  std::ostringstream os;
  open(os, title);
  axes(os, f, x_label, y_label);
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    for (std::size_t i = 0; i < n; i += stride) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    items.emplace_back(s.label, s.color);
  }
  legend(os, f, items);
  os << "</svg>\n";
  return os.str();
}

std::string shape_overlay(const std::string& title, const std::vector<Polyline>& curves, const Point2& goal) {
  Frame f;
  f.x.add(goal.x());
  f.y.add(goal.y());
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      f.x.add(p.x());
      f.y.add(p.y());
    }
  }
  f.x.finish();
  f.y.finish();
  // equal aspect: grow the narrower range around its centre
  const double scale = std::max((f.x.hi - f.x.lo) / f.width, (f.y.hi - f.y.lo) / f.height) * 1.1;
  const double cx = 0.5 * (f.x.lo + f.x.hi);
  const double cy = 0.5 * (f.y.lo + f.y.hi);
  f.x.lo = cx - 0.5 * scale * f.width;
  f.x.hi = cx + 0.5 * scale * f.width;
  f.y.lo = cy - 0.5 * scale * f.height;
  f.y.hi = cy + 0.5 * scale * f.height;

  std::ostringstream os;
  open(os, title);
  axes(os, f, "x [m]", "y [m]");
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& c : curves) {
    os << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"2.5\" points=\"";
    for (const auto& p : c.points) os << num(f.px(p.x())) << ',' << num(f.py(p.y())) << ' ';
    os << "\"/>\n";
    if (!c.points.empty()) {
      os << "<circle cx=\"" << num(f.px(c.points.front().x())) << "\" cy=\"" << num(f.py(c.points.front().y()))
         << "\" r=\"4\" fill=\"" << c.color << "\"/>\n";
    }
    items.emplace_back(c.label, c.color);
  }
  const double gx = f.px(goal.x());
  const double gy = f.py(goal.y());
  os << "<path d=\"M" << num(gx - 7) << ' ' << num(gy - 7) << " L" << num(gx + 7) << ' ' << num(gy + 7) << " M"
     << num(gx - 7) << ' ' << num(gy + 7) << " L" << num(gx + 7) << ' ' << num(gy - 7)
     << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  items.emplace_back("goal", "#d62728");
  legend(os, f, items);
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values, const std::string& unit) {
  Frame f;
  f.width -= 60;
  const double dx = xs.size() > 1 ? xs[1] - xs[0] : 0.1;
  const double dy = ys.size() > 1 ? ys[1] - ys[0] : 0.1;
  f.x.lo = xs.front() - 0.5 * dx;
  f.x.hi = xs.back() + 0.5 * dx;
  f.y.lo = ys.front() - 0.5 * dy;
  f.y.hi = ys.back() + 0.5 * dy;

  Range v;
  for (double e : values) v.add(e);
  v.finish();
  if (v.lo > 0.0) v.lo = 0.0;

  std::ostringstream os;
  open(os, title);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = values[j * xs.size() + i];
      const std::string fill = std::isfinite(e) ? colormap((e - v.lo) / (v.hi - v.lo)) : "#bbbbbb";
      os << "<rect x=\"" << num(f.px(xs[i] - 0.5 * dx)) << "\" y=\"" << num(f.py(ys[j] + 0.5 * dy))
         << "\" width=\"" << num(f.px(xs[i] + 0.5 * dx) - f.px(xs[i] - 0.5 * dx)) << "\" height=\""
         << num(f.py(ys[j] - 0.5 * dy) - f.py(ys[j] + 0.5 * dy)) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  axes(os, f, "goal x [m]", "goal y [m]");
  const double bx = f.left + f.width + 20;
  for (int k = 0; k < 50; ++k) {
    const double t = k / 49.0;
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(f.top + f.height * (1 - t) - f.height / 50) << "\" width=\"14\""
       << " height=\"" << num(f.height / 50 + 0.5) << "\" fill=\"" << colormap(t) << "\"/>\n";
  }
  os << "<text x=\"" << num(bx) << "\" y=\"" << num(f.top - 6) << "\">" << num(v.hi) << ' ' << escape(unit)
     << "</text>\n";
  os << "<text x=\"" << num(bx) << "\" y=\"" << num(f.top + f.height + 16) << "\">" << num(v.lo) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace dlo::svg
