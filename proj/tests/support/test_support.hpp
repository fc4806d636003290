#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dlo/io.hpp"
#include "dlo/model.hpp"

namespace dlo::test {

inline std::filesystem::path data_dir() { return DLO_DATA_DIR; }

inline ObjectParams fixture(const std::string& name) { return io::load_object(data_dir() / "objects" / (name + ".json")); }

inline std::vector<std::string> object_names() { return {"ob1", "ob2", "ob3", "ob4", "ob5", "ob6"}; }

inline Vec uniform_vec(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

/// Random floating-base configuration with moderate curvature.
inline Vec random_config(std::mt19937_64& rng, const ObjectParams& p, double curvature = 3.0) {
  Vec q(p.dofs());
  q.head(p.shape_dofs()) = uniform_vec(rng, p.shape_dofs(), -curvature, curvature);
  q.tail<3>() = uniform_vec(rng, 3, -0.5, 0.5);
  q(phi_index(p)) *= 2.0 * 3.14159;
  return q;
}

/// Central-difference Jacobian of f at x, step h.
inline Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += h;
    xm(k) -= h;
    J.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace dlo::test
