// Shared builders for the test suites.
#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "cuspweyl/manifold_model.hpp"

namespace testing_support {

inline constexpr double pi = std::numbers::pi;

inline cuspweyl::ManifoldModel circle_model(double omega, double delta = 1.0, double a = 1.0,
                                            double length = 2.0 * std::numbers::pi) {
  cuspweyl::ManifoldModel m;
  m.n = 2;
  cuspweyl::CuspEnd c;
  c.cross_section.lengths = {length};
  c.cross_section.magnetic = {omega};
  c.a = a;
  c.delta = delta;
  m.cusps.push_back(c);
  return m;
}

inline cuspweyl::TorusCrossSection circle(double omega, double length = 2.0 * std::numbers::pi) {
  return {{length}, {omega}};
}

inline std::string models_dir() { return CUSPWEYL_MODELS_DIR; }

}  // namespace testing_support
