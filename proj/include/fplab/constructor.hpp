#pragma once

#include <array>

#include "fplab/solve.hpp"

namespace fplab {

struct ConstructReport {
  PayoffMatrix matrix;          // input with the constant column appended
  Rational base_value;          // value of the input game
  Rational new_value;           // value after appending
  bool value_equals_vprime = false;
  bool a1_after = false;
  bool appended_dominated = false;  // true when v' > base value
};

// Appends the column v'*1_n. With v' < value(A) this is the positive-measure
// construction; with v' > value(A) the new column is strictly dominated and
// nothing changes. The v' < v condition is reported, not enforced.
inline ConstructReport append_constant_column(const PayoffMatrix& a,
                                              const Rational& v_prime) {
  MatR ext(a.rows(), a.cols() + 1);
  ext.leftCols(a.cols()) = a.mat();
  for (int i = 0; i < a.rows(); ++i) ext(i, a.cols()) = v_prime;

  GameAnalysis base = solve_game(a);
  PayoffMatrix out(std::move(ext));
  GameAnalysis after = solve_game(out);
  ConstructReport rep{std::move(out),
                      base.value,
                      after.value,
                      after.value == v_prime,
                      check_a1(after),
                      v_prime > base.value};
  return rep;
}

struct EnvelopeResult {
  // Exact argmax of the lower envelope min_i {a_1i p + a_2i (1-p)} and its
  // value; NE_x of the 2-row game is {(p, 1-p) : p in [argmax_lo, argmax_hi]}.
  Rational value;
  Rational argmax_lo, argmax_hi;
  // Float samples for plotting: grid point, per-line values, envelope.
  std::vector<double> grid;
  std::vector<std::vector<double>> lines;  // lines[i][g]
  std::vector<double> envelope;
};

// Lower envelope of the m affine payoff lines of a 2-row game over p in
// [0, 1]. Breakpoints are exact pairwise intersections; the envelope is
// concave, so its argmax is the interval spanned by the maximizing
// candidates.
inline EnvelopeResult lower_envelope(const PayoffMatrix& a, int grid_points) {
  if (a.rows() != 2)
    throw std::invalid_argument("lower envelope requires a 2-row game");
  if (grid_points < 2)
    throw std::invalid_argument("need at least 2 grid points");
  const int m = a.cols();
  auto line_at = [&](int i, const Rational& p) {
    return Rational(a.entry(1, i) * p + a.entry(2, i) * (1 - p));
  };
  auto envelope_at = [&](const Rational& p) {
    Rational v = line_at(1, p);
    for (int i = 2; i <= m; ++i) v = std::min(v, line_at(i, p));
    return v;
  };

  std::vector<Rational> candidates{Rational(0), Rational(1)};
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      // a1i p + a2i (1-p) == a1j p + a2j (1-p)
      Rational da = a.entry(1, i) - a.entry(2, i) - a.entry(1, j) + a.entry(2, j);
      if (da == 0) continue;  // parallel lines
      Rational p = (a.entry(2, j) - a.entry(2, i)) / da;
      if (p >= 0 && p <= 1) candidates.push_back(p);
    }

  EnvelopeResult res;
  res.value = envelope_at(candidates[0]);
  for (const auto& p : candidates) res.value = std::max(res.value, envelope_at(p));
  res.argmax_lo = Rational(2);
  res.argmax_hi = Rational(-1);
  for (const auto& p : candidates)
    if (envelope_at(p) == res.value) {
      res.argmax_lo = std::min(res.argmax_lo, p);
      res.argmax_hi = std::max(res.argmax_hi, p);
    }

  res.lines.assign(m, {});
  for (int g = 0; g < grid_points; ++g) {
    Rational p(g, grid_points - 1);
    res.grid.push_back(to_double(p));
    double env = 0;
    for (int i = 1; i <= m; ++i) {
      double v = to_double(line_at(i, p));
      res.lines[i - 1].push_back(v);
      env = i == 1 ? v : std::min(env, v);
    }
    res.envelope.push_back(env);
  }
  return res;
}

// Planar coordinates for plotting S_3 trajectories: e_1 -> (0,0),
// e_2 -> (1,0), e_3 -> (1/2, sqrt(3)/2). Affine and injective on S_3.
inline std::array<double, 2> ternary_project(const VecR& x) {
  if (x.size() != 3)
    throw std::invalid_argument("ternary projection needs a 3-vector");
  Rational first = x[1] + x[2] / 2;
  return {to_double(first), std::sqrt(3.0) / 2.0 * to_double(x[2])};
}

}  // namespace fplab
