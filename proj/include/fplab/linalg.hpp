#pragma once

#include <Eigen/Dense>
#include <optional>

#include "fplab/game.hpp"

namespace fplab {

inline Eigen::FullPivLU<MatR> exact_lu(const MatR& m) {
  Eigen::FullPivLU<MatR> lu(m);
  lu.setThreshold(Rational(0));  // exact pivot test
  return lu;
}

inline int exact_rank(const MatR& m) {
  if (m.size() == 0) return 0;
  return static_cast<int>(exact_lu(m).rank());
}

// Unique solution of M z = b, or nullopt when the system is inconsistent or
// underdetermined.
inline std::optional<VecR> solve_unique(const MatR& m, const VecR& b) {
  auto lu = exact_lu(m);
  if (lu.rank() < m.cols()) return std::nullopt;
  VecR z = lu.solve(b);
  if (m * z != b) return std::nullopt;
  return z;
}

// Affine dimension of a point set: rank of the differences to the first point.
inline int affine_dimension(const std::vector<VecR>& points) {
  if (points.empty()) return -1;
  if (points.size() == 1) return 0;
  MatR diffs(points[0].size(), points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i)
    diffs.col(i - 1) = points[i] - points[0];
  return exact_rank(diffs);
}

}  // namespace fplab
