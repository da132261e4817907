#pragma once

#include <optional>
#include <vector>

#include "fplab/linalg.hpp"

namespace fplab {

// Constraint system E z = e, G z >= g over z in R^vars. All users in this
// project have bounded feasible sets (products of simplices and
// payoff-bounded epigraph slices), so every nonempty region has a vertex and
// vertex enumeration decides feasibility and optimality exactly.
struct LinearSystem {
  MatR eq;
  VecR eq_rhs;
  MatR ge;
  VecR ge_rhs;

  int vars() const {
    return static_cast<int>(eq.cols() > 0 ? eq.cols() : ge.cols());
  }

  bool satisfies(const VecR& z) const {
    if (eq.rows() > 0 && eq * z != eq_rhs) return false;
    if (ge.rows() > 0) {
      VecR s = ge * z;
      for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] < ge_rhs[i]) return false;
    }
    return true;
  }
};

namespace detail {

inline bool lex_less(const VecR& a, const VecR& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

inline void sort_dedupe(std::vector<VecR>& pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const VecR& a, const VecR& b) { return a == b; }),
            pts.end());
}

template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// All vertices of {z : E z = e, G z >= g}: points where the active constraints
// have full rank. Each candidate comes from turning a subset of inequalities
// into equalities; degenerate vertices are found several times and deduped.
inline std::vector<VecR> enumerate_vertices(const LinearSystem& sys) {
  const int nv = sys.vars();
  const int n_eq = static_cast<int>(sys.eq.rows());
  const int n_ge = static_cast<int>(sys.ge.rows());
  const int eq_rank = sys.eq.rows() > 0 ? exact_rank(sys.eq) : 0;
  const int need = nv - eq_rank;

  std::vector<VecR> vertices;
  detail::for_each_subset(n_ge, need, [&](const std::vector<int>& subset) {
    MatR m(n_eq + need, nv);
    VecR rhs(n_eq + need);
    if (n_eq > 0) {
      m.topRows(n_eq) = sys.eq;
      rhs.head(n_eq) = sys.eq_rhs;
    }
    for (int i = 0; i < need; ++i) {
      m.row(n_eq + i) = sys.ge.row(subset[i]);
      rhs[n_eq + i] = sys.ge_rhs[subset[i]];
    }
    auto z = solve_unique(m, rhs);
    if (z && sys.satisfies(*z)) vertices.push_back(std::move(*z));
  });
  detail::sort_dedupe(vertices);
  return vertices;
}

struct LpSolution {
  Rational value;
  std::vector<VecR> optima;  // all optimal vertices
};

// max c^T z over the (bounded) feasible set; nullopt when infeasible.
inline std::optional<LpSolution> lp_maximize(const VecR& objective,
                                             const LinearSystem& sys) {
  auto vertices = enumerate_vertices(sys);
  if (vertices.empty()) return std::nullopt;
  LpSolution out;
  out.value = (objective.transpose() * vertices[0])(0, 0);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    Rational v = (objective.transpose() * vertices[i])(0, 0);
    if (v > out.value) out.value = v;
  }
  for (auto& z : vertices)
    if ((objective.transpose() * z)(0, 0) == out.value)
      out.optima.push_back(std::move(z));
  return out;
}

inline std::optional<VecR> lp_feasible_point(const LinearSystem& sys) {
  auto vertices = enumerate_vertices(sys);
  if (vertices.empty()) return std::nullopt;
  return vertices.front();
}

}  // namespace fplab
