#pragma once

#include <string>
#include <vector>

#include "fplab/polytope.hpp"

namespace fplab {

inline constexpr int kDefaultMaxDimSum = 16;

// Games beyond the configured desk-scale cap are rejected up front; the
// vertex-enumeration solver is exponential by design.
struct DeskScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FaceLabel {
  ActionSet columns;  // I, Player-2 column labels with 1 in I
  Polytope region;    // closure of B_I inside NE_x
};

struct A3FaceReport {
  ActionSet columns;
  std::optional<int> witness_l;  // coordinate never weakly maximal on the hull
  // For a failing face: one maximizing hull point per coordinate l.
  std::vector<std::pair<int, VecR>> violating_w;
};

struct A3Report {
  bool holds = false;
  std::vector<A3FaceReport> faces;
};

struct DominatedAction {
  int player;  // 1 or 2
  int action;  // 1-based index in the examined matrix
  bool pure;   // dominated by a single action (else only by a mixture)
  int dominator = 0;  // set when pure
};

struct NormalizedGame {
  PayoffMatrix matrix;
  // permutation[j] = original 1-based column behind new column j+1.
  std::vector<int> permutation;
  std::vector<int> removed_duplicate_columns;  // original 1-based indices
  // New-index columns (beyond 1) still lying in span{1_n}; nonempty only for
  // games with a strictly dominated constant column v' > v.
  std::vector<int> span_violations;
  std::vector<DominatedAction> dominated;
};

struct GameAnalysis {
  int n = 0, m = 0;
  Rational value;
  Polytope ne_x, ne_y;
  bool a1 = false, a2 = false;
  std::optional<A3Report> a3;  // set only when A1 and A2 hold and m_norm >= 2
  std::optional<NormalizedGame> normalization;  // set when A1 holds
  std::optional<Rational> reduced_value;        // v_{-1} of the normalized game
  std::vector<FaceLabel> faces;  // labels refer to normalized columns
};

namespace detail {

inline LinearSystem simplex_system(int dim) {
  LinearSystem sys;
  sys.eq = MatR::Ones(1, dim);
  sys.eq_rhs = VecR::Ones(1);
  sys.ge = MatR::Identity(dim, dim);
  sys.ge_rhs = VecR::Zero(dim);
  return sys;
}

// max over x in S_n of min_i c_i^T x, via the epigraph in (x, t).
inline Rational maxmin_value(const PayoffMatrix& a) {
  const int n = a.rows(), m = a.cols();
  LinearSystem sys;
  sys.eq.resize(1, n + 1);
  sys.eq.setZero();
  sys.eq.block(0, 0, 1, n).setOnes();
  sys.eq_rhs = VecR::Ones(1);
  sys.ge.resize(n + m, n + 1);
  sys.ge.setZero();
  sys.ge_rhs = VecR::Zero(n + m);
  for (int i = 0; i < n; ++i) sys.ge(i, i) = 1;  // x_i >= 0
  for (int j = 0; j < m; ++j) {                  // c_j^T x - t >= 0
    sys.ge.block(n + j, 0, 1, n) = a.mat().col(j).transpose();
    sys.ge(n + j, n) = -1;
  }
  VecR obj = VecR::Zero(n + 1);
  obj[n] = 1;
  auto sol = lp_maximize(obj, sys);
  if (!sol) throw std::logic_error("simplex epigraph cannot be infeasible");
  return sol->value;
}

// min over y in S_m of max_j r_j^T y, via the epigraph in (y, s).
inline Rational minmax_value(const PayoffMatrix& a) {
  const int n = a.rows(), m = a.cols();
  LinearSystem sys;
  sys.eq.resize(1, m + 1);
  sys.eq.setZero();
  sys.eq.block(0, 0, 1, m).setOnes();
  sys.eq_rhs = VecR::Ones(1);
  sys.ge.resize(m + n, m + 1);
  sys.ge.setZero();
  sys.ge_rhs = VecR::Zero(m + n);
  for (int j = 0; j < m; ++j) sys.ge(j, j) = 1;  // y_j >= 0
  for (int i = 0; i < n; ++i) {                  // s - r_i^T y >= 0
    sys.ge.block(m + i, 0, 1, m) = -a.mat().row(i);
    sys.ge(m + i, m) = 1;
  }
  VecR obj = VecR::Zero(m + 1);
  obj[m] = -1;
  auto sol = lp_maximize(obj, sys);
  if (!sol) throw std::logic_error("simplex epigraph cannot be infeasible");
  return -sol->value;
}

}  // namespace detail

// {x in S_n : c_i^T x >= v for all i} — Player 1's optimal set at level v.
inline Polytope ne_x_polytope(const PayoffMatrix& a, const Rational& v) {
  const int n = a.rows();
  std::vector<HalfSpace> ineqs;
  for (int i = 0; i < n; ++i) {
    VecR e = VecR::Zero(n);
    e[i] = 1;
    ineqs.push_back({e, Rational(0)});
  }
  for (int j = 1; j <= a.cols(); ++j) ineqs.push_back({a.column(j), v});
  std::vector<Hyperplane> eqs{{VecR::Ones(n), Rational(1)}};
  return Polytope::from_constraints(n, std::move(ineqs), std::move(eqs));
}

// {y in S_m : r_j^T y <= v for all j}.
inline Polytope ne_y_polytope(const PayoffMatrix& a, const Rational& v) {
  const int m = a.cols();
  std::vector<HalfSpace> ineqs;
  for (int j = 0; j < m; ++j) {
    VecR e = VecR::Zero(m);
    e[j] = 1;
    ineqs.push_back({e, Rational(0)});
  }
  for (int i = 1; i <= a.rows(); ++i) ineqs.push_back({VecR(-a.row(i)), -v});
  std::vector<Hyperplane> eqs{{VecR::Ones(m), Rational(1)}};
  return Polytope::from_constraints(m, std::move(ineqs), std::move(eqs));
}

inline void check_desk_scale(const PayoffMatrix& a,
                             int max_dim_sum = kDefaultMaxDimSum) {
  if (a.rows() + a.cols() > max_dim_sum)
    throw DeskScaleError("game size n+m=" +
                         std::to_string(a.rows() + a.cols()) +
                         " exceeds desk-scale cap " +
                         std::to_string(max_dim_sum));
}

// Exact value and both equilibrium polytopes. The max-min and min-max values
// are computed independently and must agree (von Neumann); a mismatch is a
// solver bug and aborts.
inline GameAnalysis solve_game(const PayoffMatrix& a,
                               int max_dim_sum = kDefaultMaxDimSum) {
  check_desk_scale(a, max_dim_sum);
  GameAnalysis ga;
  ga.n = a.rows();
  ga.m = a.cols();
  ga.value = detail::maxmin_value(a);
  Rational dual = detail::minmax_value(a);
  if (dual != ga.value)
    throw std::logic_error("minimax duality violated: " + to_string(ga.value) +
                           " vs " + to_string(dual));
  ga.ne_x = ne_x_polytope(a, ga.value);
  ga.ne_y = ne_y_polytope(a, ga.value);
  if (ga.ne_x.empty() || ga.ne_y.empty())
    throw std::logic_error("equilibrium polytopes cannot be empty");
  return ga;
}

// A1: NE_x has positive measure in aff(S_n), i.e., affine dimension n-1.
inline bool check_a1(const GameAnalysis& ga) {
  return ga.ne_x.affine_dim() == ga.n - 1;
}

// A2: every equilibrium strategy of Player 1 is fully mixed.
inline bool check_a2(const GameAnalysis& ga) {
  for (const auto& v : ga.ne_x.vertices())
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] == 0) return false;
  return true;
}

// Value of the reduced game on the selected columns.
inline Rational reduced_game_value(const PayoffMatrix& a,
                                   const ActionSet& columns) {
  return detail::maxmin_value(submatrix(a, columns).matrix);
}

namespace detail {

// Strict mixed dominance margin: how much better the best mixture over the
// other actions can do against every opponent response. Positive margin means
// the action is strictly dominated.
inline Rational dominance_margin_col(const PayoffMatrix& a, int col) {
  const int n = a.rows(), m = a.cols();
  // Variables (theta over other columns, s); maximize s with
  // c_col[i] - (A_{-col} theta)_i >= s for all i.
  LinearSystem sys;
  sys.eq.resize(1, m);
  sys.eq.setZero();
  sys.eq.block(0, 0, 1, m - 1).setOnes();
  sys.eq_rhs = VecR::Ones(1);
  sys.ge.resize((m - 1) + n, m);
  sys.ge.setZero();
  sys.ge_rhs.resize((m - 1) + n);
  sys.ge_rhs.setZero();
  for (int j = 0; j < m - 1; ++j) sys.ge(j, j) = 1;
  VecR target = a.column(col);
  for (int i = 0; i < n; ++i) {
    int k = 0;
    for (int j = 1; j <= m; ++j) {
      if (j == col) continue;
      sys.ge(m - 1 + i, k) = -a.entry(i + 1, j);
      ++k;
    }
    sys.ge(m - 1 + i, m - 1) = -1;
    sys.ge_rhs[m - 1 + i] = -target[i];
  }
  VecR obj = VecR::Zero(m);
  obj[m - 1] = 1;
  auto sol = lp_maximize(obj, sys);
  return sol ? sol->value : Rational(-1);
}

inline Rational dominance_margin_row(const PayoffMatrix& a, int row) {
  // Player 1 maximizes; row dominated iff a mixture beats it everywhere.
  MatR t = -a.mat().transpose();
  return dominance_margin_col(PayoffMatrix(std::move(t)), row);
}

}  // namespace detail

// Strictly dominated pure actions for both players (pure and mixed
// dominance), reported against the given matrix.
inline std::vector<DominatedAction> find_dominated_actions(
    const PayoffMatrix& a) {
  std::vector<DominatedAction> out;
  const int n = a.rows(), m = a.cols();
  for (int j = 1; j <= m; ++j) {
    int pure_by = 0;
    for (int k = 1; k <= m && pure_by == 0; ++k) {
      if (k == j) continue;
      bool strict = true;
      for (int i = 1; i <= n; ++i)
        if (a.entry(i, k) >= a.entry(i, j)) {
          strict = false;
          break;
        }
      if (strict) pure_by = k;
    }
    if (pure_by != 0) {
      out.push_back({2, j, true, pure_by});
    } else if (m >= 2 && detail::dominance_margin_col(a, j) > 0) {
      out.push_back({2, j, false, 0});
    }
  }
  for (int i = 1; i <= n; ++i) {
    int pure_by = 0;
    for (int k = 1; k <= n && pure_by == 0; ++k) {
      if (k == i) continue;
      bool strict = true;
      for (int j = 1; j <= m; ++j)
        if (a.entry(k, j) <= a.entry(i, j)) {
          strict = false;
          break;
        }
      if (strict) pure_by = k;
    }
    if (pure_by != 0) {
      out.push_back({1, i, true, pure_by});
    } else if (n >= 2 && detail::dominance_margin_row(a, i) > 0) {
      out.push_back({1, i, false, 0});
    }
  }
  return out;
}

// Moves the constant column v*1_n to index 1 and drops duplicates of it.
// Requires A1 (some constant column must equal the value).
inline NormalizedGame normalize_game(const PayoffMatrix& a,
                                     const Rational& value) {
  std::vector<int> constant_at_value;
  std::vector<int> other_span;  // constant columns with a different value
  for (int j = 1; j <= a.cols(); ++j) {
    if (auto c = is_constant_column(a.column(j))) {
      if (*c == value) {
        constant_at_value.push_back(j);
      } else if (*c < value) {
        throw std::logic_error(
            "constant column below the game value is impossible");
      } else {
        other_span.push_back(j);
      }
    }
  }
  if (constant_at_value.empty())
    throw std::invalid_argument(
        "normalize_game requires a constant column equal to the value (A1)");

  NormalizedGame ng{PayoffMatrix(MatR::Zero(1, 1)), {}, {}, {}, {}};
  ng.removed_duplicate_columns.assign(constant_at_value.begin() + 1,
                                      constant_at_value.end());
  ng.permutation.push_back(constant_at_value.front());
  for (int j = 1; j <= a.cols(); ++j) {
    if (j == constant_at_value.front()) continue;
    if (std::find(ng.removed_duplicate_columns.begin(),
                  ng.removed_duplicate_columns.end(),
                  j) != ng.removed_duplicate_columns.end())
      continue;
    ng.permutation.push_back(j);
  }
  MatR mat(a.rows(), ng.permutation.size());
  for (std::size_t j = 0; j < ng.permutation.size(); ++j)
    mat.col(j) = a.mat().col(ng.permutation[j] - 1);
  ng.matrix = PayoffMatrix(std::move(mat));
  for (std::size_t j = 0; j < ng.permutation.size(); ++j)
    if (std::find(other_span.begin(), other_span.end(), ng.permutation[j]) !=
        other_span.end())
      ng.span_violations.push_back(static_cast<int>(j) + 1);
  ng.dominated = find_dominated_actions(ng.matrix);
  return ng;
}

}  // namespace fplab
