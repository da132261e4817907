// Test-only oracles, deliberately independent of the production solver path:
// a hand-rolled reduced-row-echelon solver over rationals, exhaustive
// constraint-subset enumeration for game values and equilibrium vertices,
// barycentric grid search for polytope distances, and an exact optimality
// certificate for Euclidean projections.
#pragma once

#include <vector>

#include "fplab/game.hpp"
#include "fplab/polytope.hpp"
#include "fplab/rng.hpp"

namespace fplab::oracle {

using Row = std::vector<Rational>;
using Table = std::vector<Row>;

// Solves M z = rhs by Gauss-Jordan. Returns the unique solution, or nullopt
// when the system is inconsistent or underdetermined.
inline std::optional<Row> rref_solve(Table m, Row rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t lead = 0;
  std::vector<int> pivot_col;
  for (std::size_t r = 0; r < rows && lead < cols; ++r) {
    std::size_t sel = r;
    while (sel < rows && m[sel][lead] == 0) ++sel;
    if (sel == rows) {
      --r;
      ++lead;
      continue;
    }
    std::swap(m[sel], m[r]);
    std::swap(rhs[sel], rhs[r]);
    Rational inv = m[r][lead];
    for (auto& v : m[r]) v /= inv;
    rhs[r] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][lead] == 0) continue;
      Rational f = m[i][lead];
      for (std::size_t c = 0; c < cols; ++c) m[i][c] -= f * m[r][c];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(lead));
    ++lead;
  }
  // Inconsistent: zero row with nonzero rhs.
  for (std::size_t r = 0; r < rows; ++r) {
    bool all_zero = true;
    for (const auto& v : m[r])
      if (v != 0) all_zero = false;
    if (all_zero && rhs[r] != 0) return std::nullopt;
  }
  if (pivot_col.size() != cols) return std::nullopt;  // underdetermined
  Row z(cols);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) z[pivot_col[r]] = rhs[r];
  return z;
}

struct OracleSolution {
  Rational value;
  std::vector<Row> ne_x, ne_y;  // sorted lexicographically
};

namespace detail {

inline void sort_points(std::vector<Row>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// All basic feasible points of {eq; subset of ge as equalities} over
// `vars` variables, trying every one of the 2^|ge| subsets.
inline std::vector<Row> basic_points(const Table& eq, const Row& eq_rhs,
                                     const Table& ge, const Row& ge_rhs,
                                     std::size_t vars) {
  std::vector<Row> out;
  const std::size_t n_ge = ge.size();
  for (std::uint64_t bits = 0; bits < (1ull << n_ge); ++bits) {
    Table m = eq;
    Row rhs = eq_rhs;
    for (std::size_t i = 0; i < n_ge; ++i)
      if (bits & (1ull << i)) {
        m.push_back(ge[i]);
        rhs.push_back(ge_rhs[i]);
      }
    auto z = rref_solve(m, rhs);
    if (!z) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < n_ge && feasible; ++i) {
      Rational dot = 0;
      for (std::size_t c = 0; c < vars; ++c) dot += ge[i][c] * (*z)[c];
      if (dot < ge_rhs[i]) feasible = false;
    }
    if (feasible) out.push_back(std::move(*z));
  }
  sort_points(out);
  return out;
}

}  // namespace detail

// Value and both equilibrium vertex sets by pure enumeration, solving the
// max-min and min-max sides separately and insisting they agree.
inline OracleSolution solve(const PayoffMatrix& a) {
  const int n = a.rows(), m = a.cols();
  OracleSolution sol;
  {
    // Variables (x, t): maximize t over x in S_n, c_j^T x - t >= 0.
    Table eq{Row(n + 1, Rational(0))};
    for (int i = 0; i < n; ++i) eq[0][i] = 1;
    Row eq_rhs{Rational(1)};
    Table ge;
    Row ge_rhs;
    for (int i = 0; i < n; ++i) {
      Row r(n + 1, Rational(0));
      r[i] = 1;
      ge.push_back(std::move(r));
      ge_rhs.push_back(0);
    }
    for (int j = 1; j <= m; ++j) {
      Row r(n + 1, Rational(0));
      VecR col = a.column(j);
      for (int i = 0; i < n; ++i) r[i] = col[i];
      r[n] = -1;
      ge.push_back(std::move(r));
      ge_rhs.push_back(0);
    }
    auto pts = detail::basic_points(eq, eq_rhs, ge, ge_rhs, n + 1);
    if (pts.empty()) throw std::logic_error("oracle: empty epigraph");
    Rational best = pts[0][n];
    for (const auto& p : pts) best = std::max(best, p[n]);
    sol.value = best;
    for (const auto& p : pts)
      if (p[n] == best) sol.ne_x.push_back(Row(p.begin(), p.begin() + n));
    detail::sort_points(sol.ne_x);
  }
  {
    // Variables (y, s): minimize s over y in S_m, s - r_i^T y >= 0.
    Table eq{Row(m + 1, Rational(0))};
    for (int j = 0; j < m; ++j) eq[0][j] = 1;
    Row eq_rhs{Rational(1)};
    Table ge;
    Row ge_rhs;
    for (int j = 0; j < m; ++j) {
      Row r(m + 1, Rational(0));
      r[j] = 1;
      ge.push_back(std::move(r));
      ge_rhs.push_back(0);
    }
    for (int i = 1; i <= n; ++i) {
      Row r(m + 1, Rational(0));
      VecR row = a.row(i);
      for (int j = 0; j < m; ++j) r[j] = -row[j];
      r[m] = 1;
      ge.push_back(std::move(r));
      ge_rhs.push_back(0);
    }
    auto pts = detail::basic_points(eq, eq_rhs, ge, ge_rhs, m + 1);
    if (pts.empty()) throw std::logic_error("oracle: empty epigraph");
    Rational best = pts[0][m];
    for (const auto& p : pts) best = std::min(best, p[m]);
    if (best != sol.value)
      throw std::logic_error("oracle: minimax duality violated");
    for (const auto& p : pts)
      if (p[m] == best) sol.ne_y.push_back(Row(p.begin(), p.begin() + m));
    detail::sort_points(sol.ne_y);
  }
  return sol;
}

inline std::vector<Row> to_rows(const std::vector<VecR>& vs) {
  std::vector<Row> out;
  for (const auto& v : vs) {
    Row r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = v[i];
    out.push_back(std::move(r));
  }
  detail::sort_points(out);
  return out;
}

// Dense barycentric grid search over every vertex triple; covers polytopes of
// affine dimension <= 2 completely (Caratheodory). Distances in doubles.
inline double grid_min_distance(const VecR& point,
                                const std::vector<VecR>& vertices,
                                int grid) {
  const int dim = static_cast<int>(point.size());
  std::vector<std::vector<double>> vs;
  for (const auto& v : vertices) {
    std::vector<double> d(dim);
    for (int i = 0; i < dim; ++i) d[i] = to_double(v[i]);
    vs.push_back(std::move(d));
  }
  std::vector<double> p(dim);
  for (int i = 0; i < dim; ++i) p[i] = to_double(point[i]);

  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& q) {
    double d2 = 0;
    for (int i = 0; i < dim; ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
    best = std::min(best, d2);
  };
  const int nv = static_cast<int>(vs.size());
  for (int a = 0; a < nv; ++a) {
    for (int b = a; b < nv; ++b) {
      for (int c = b; c < nv; ++c) {
        for (int i = 0; i <= grid; ++i) {
          for (int j = 0; i + j <= grid; ++j) {
            int k = grid - i - j;
            std::vector<double> q(dim);
            for (int d = 0; d < dim; ++d)
              q[d] = (i * vs[a][d] + j * vs[b][d] + k * vs[c][d]) / grid;
            consider(q);
          }
          if (a == b && b == c) break;  // single point; one sample is enough
        }
      }
    }
  }
  return std::sqrt(best);
}

// Exact certificate that q is THE Euclidean projection of p onto the
// polytope: feasibility plus the variational inequality against every vertex.
inline bool certify_projection(const VecR& p, const VecR& q,
                               const Polytope& poly) {
  if (!poly.contains(q)) return false;
  for (const auto& w : poly.vertices()) {
    Rational lhs = ((p - q).transpose() * (w - q))(0, 0);
    if (lhs > 0) return false;
  }
  return true;
}

inline Rational random_rational(RngStream& rng, int max_abs_num, int max_den) {
  long long num = static_cast<long long>(rng.below(2 * max_abs_num + 1)) -
                  max_abs_num;
  long long den = 1 + static_cast<long long>(rng.below(max_den));
  return Rational(num) / Rational(den);
}

inline PayoffMatrix random_matrix(RngStream& rng, int n, int m) {
  MatR a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = random_rational(rng, 4, 4);
  return PayoffMatrix(std::move(a));
}

// Random rational point in the simplex.
inline VecR random_simplex_point(RngStream& rng, int dim) {
  VecR v(dim);
  Rational sum = 0;
  for (int i = 0; i < dim; ++i) {
    v[i] = Rational(1 + static_cast<long long>(rng.below(12)));
    sum += v[i];
  }
  for (int i = 0; i < dim; ++i) v[i] /= sum;
  return v;
}

}  // namespace fplab::oracle
