#pragma once

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "ldg/analysis.hpp"

namespace ldg::test {

inline std::shared_ptr<const Mesh> square(int n) { return std::make_shared<const Mesh>(build_square_mesh(n)); }

inline Coefficients random_field(const DgSpace& s, std::mt19937_64& rng, double scale = 1.0, int comps = 2) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Coefficients z(comps, s.total_scalar_dofs());
  for (Eigen::Index i = 0; i < z.values.size(); ++i) z.values[i] = d(rng);
  return z;
}

/// Uniform point in the reference triangle.
inline Point random_reference_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  double a = d(rng), b = d(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {a, b};
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace ldg::test
