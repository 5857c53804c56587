#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qbath/generator.hpp"

namespace qbath {

/// Slowest decay rate of a generator: min(-Re mu) over eigenvalues with a
/// decaying real part. Stationary and undamped modes are skipped. Returns 0
/// when nothing decays (purely unitary dynamics).
inline double relaxation_gap(const Generator& g) {
  Eigen::Matrix<double, 16, 16> m;
  double scale = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.matrix(i, j);
      scale = std::max(scale, std::abs(g.matrix(i, j)));
    }
  if (scale == 0.0) return 0.0;
  Eigen::EigenSolver<Eigen::Matrix<double, 16, 16>> solver(m, /*computeEigenvectors=*/false);
  const double zero = 1e-9 * scale;
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < 16; ++k) {
    const auto mu = solver.eigenvalues()(k);
    if (-mu.real() <= zero) continue;
    gap = std::min(gap, -mu.real());
  }
  if (!std::isfinite(gap)) return 0.0;
  return gap;
}

}  // namespace qbath
