#pragma once

#include "fplab/solve.hpp"

namespace fplab {

namespace detail {

// Region closure(B_I) = {x in S_n : c_i^T x = v on I, c_k^T x >= v off I}.
inline Polytope face_region(const PayoffMatrix& a_norm, const Rational& v,
                            const ActionSet& columns) {
  const int n = a_norm.rows();
  std::vector<Hyperplane> eqs{{VecR::Ones(n), Rational(1)}};
  std::vector<HalfSpace> ineqs;
  for (int i = 0; i < n; ++i) {
    VecR e = VecR::Zero(n);
    e[i] = 1;
    ineqs.push_back({e, Rational(0)});
  }
  for (int j = 1; j <= a_norm.cols(); ++j) {
    if (columns.contains(j))
      eqs.push_back({a_norm.column(j), v});
    else
      ineqs.push_back({a_norm.column(j), v});
  }
  return Polytope::from_constraints(n, std::move(ineqs), std::move(eqs));
}

// True when B_I itself (with strict inequalities off I) is nonempty:
// max of the minimum off-I slack is positive.
inline bool face_strictly_nonempty(const PayoffMatrix& a_norm,
                                   const Rational& v,
                                   const ActionSet& columns) {
  const int n = a_norm.rows(), m = a_norm.cols();
  std::vector<int> off;
  for (int j = 1; j <= m; ++j)
    if (!columns.contains(j)) off.push_back(j);
  if (off.empty()) return !face_region(a_norm, v, columns).empty();

  // Variables (x, s); maximize s subject to c_k^T x - s >= v off I.
  LinearSystem sys;
  sys.eq.resize(1 + columns.size(), n + 1);
  sys.eq.setZero();
  sys.eq_rhs.resize(1 + columns.size());
  sys.eq.block(0, 0, 1, n).setOnes();
  sys.eq_rhs[0] = 1;
  for (int i = 0; i < columns.size(); ++i) {
    sys.eq.block(1 + i, 0, 1, n) = a_norm.column(columns.at(i)).transpose();
    sys.eq_rhs[1 + i] = v;
  }
  sys.ge.resize(n + off.size(), n + 1);
  sys.ge.setZero();
  sys.ge_rhs.resize(n + off.size());
  sys.ge_rhs.setZero();
  for (int i = 0; i < n; ++i) sys.ge(i, i) = 1;
  for (std::size_t k = 0; k < off.size(); ++k) {
    sys.ge.block(n + k, 0, 1, n) = a_norm.column(off[k]).transpose();
    sys.ge(n + k, n) = -1;
    sys.ge_rhs[n + k] = v;
  }
  VecR obj = VecR::Zero(n + 1);
  obj[n] = 1;
  auto sol = lp_maximize(obj, sys);
  return sol && sol->value > 0;
}

}  // namespace detail

// All labels I (1 in I) whose best-response region B_I meets NE_x, with their
// region polytopes. Label {1} is the interior of NE_x. Exponential in m.
inline std::vector<FaceLabel> enumerate_faces(const PayoffMatrix& a_norm,
                                              const Rational& value) {
  const int m = a_norm.cols();
  if (m < 2)
    throw std::invalid_argument(
        "enumerate_faces requires a normalized game with at least one "
        "non-constant column");
  if (is_constant_column(a_norm.column(1)) != std::optional<Rational>(value))
    throw std::invalid_argument(
        "enumerate_faces requires column 1 to equal value*1_n");

  std::vector<FaceLabel> out;
  const int free_cols = m - 1;
  for (std::uint32_t bits = 0; bits < (1u << free_cols); ++bits) {
    std::vector<int> ids{1};
    for (int j = 0; j < free_cols; ++j)
      if (bits & (1u << j)) ids.push_back(j + 2);
    ActionSet label(std::move(ids));
    if (!detail::face_strictly_nonempty(a_norm, value, label)) continue;
    Polytope region = detail::face_region(a_norm, value, label);
    if (region.empty()) continue;
    out.push_back({label, std::move(region)});
  }
  return out;
}

// A3 checker. For every boundary face label I (|I| >= 2) and candidate
// coordinate l, decide by exact LP feasibility whether some point of
// conv{c_i : i in I, c_i not in span 1_n} makes coordinate l weakly maximal.
// The face passes when some l admits no such point. Quantified universally
// over boundary faces; the per-face reports expose each face separately.
inline A3Report check_a3_faces(const PayoffMatrix& a_norm,
                               const std::vector<FaceLabel>& faces) {
  const int n = a_norm.rows();
  A3Report report;
  report.holds = true;
  for (const auto& face : faces) {
    if (face.columns.size() < 2) continue;
    std::vector<int> hull_cols;
    for (int i : face.columns)
      if (!is_constant_column(a_norm.column(i))) hull_cols.push_back(i);
    // Under Assumption 4 the non-span columns of I are exactly I \ {1}.
    if (static_cast<int>(hull_cols.size()) != face.columns.size() - 1)
      throw std::logic_error(
          "face contains an unexpected span{1} column; game not normalized");

    A3FaceReport fr;
    fr.columns = face.columns;
    const int p = static_cast<int>(hull_cols.size());
    for (int l = 1; l <= n && !fr.witness_l; ++l) {
      // theta in S_p with sum_i theta_i (c_i[l] - c_i[j]) >= 0 for all j.
      LinearSystem sys;
      sys.eq = MatR::Ones(1, p);
      sys.eq_rhs = VecR::Ones(1);
      sys.ge.resize(p + n, p);
      sys.ge.setZero();
      sys.ge_rhs = VecR::Zero(p + n);
      for (int i = 0; i < p; ++i) sys.ge(i, i) = 1;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < p; ++i)
          sys.ge(p + j, i) =
              a_norm.entry(l, hull_cols[i]) - a_norm.entry(j + 1, hull_cols[i]);
      if (auto theta = lp_feasible_point(sys)) {
        VecR w = VecR::Zero(n);
        for (int i = 0; i < p; ++i) w += (*theta)[i] * a_norm.column(hull_cols[i]);
        fr.violating_w.emplace_back(l, std::move(w));
      } else {
        fr.witness_l = l;
      }
    }
    if (!fr.witness_l) report.holds = false;
    report.faces.push_back(std::move(fr));
  }
  return report;
}

// Convenience wrapper enforcing the hypothesis gate: the boundary-face
// condition is only defined for normalized games with a full-dimensional,
// fully mixed equilibrium set.
inline A3Report check_a3(const PayoffMatrix& a_norm,
                         const GameAnalysis& ga_norm) {
  if (!ga_norm.a1 || !ga_norm.a2)
    throw std::invalid_argument(
        "a3 is defined only when a1 and a2 hold");
  return check_a3_faces(a_norm, enumerate_faces(a_norm, ga_norm.value));
}

struct StructureCheck {
  std::string name;
  bool applicable = false;
  bool pass = false;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (c.applicable && !c.pass) return false;
    return true;
  }
  const StructureCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Full analysis pipeline: value, both polytopes, A1/A2, normalization,
// face decomposition, A3 and the reduced value, in dependency order.
inline GameAnalysis analyze_game(const PayoffMatrix& a,
                                 int max_dim_sum = kDefaultMaxDimSum) {
  GameAnalysis ga = solve_game(a, max_dim_sum);
  ga.a1 = check_a1(ga);
  ga.a2 = check_a2(ga);
  if (!ga.a1) return ga;
  ga.normalization = normalize_game(a, ga.value);
  const PayoffMatrix& nm = ga.normalization->matrix;
  if (nm.cols() >= 2) {
    std::vector<int> rest;
    for (int j = 2; j <= nm.cols(); ++j) rest.push_back(j);
    ga.reduced_value = reduced_game_value(nm, ActionSet(rest));
    ga.faces = enumerate_faces(nm, ga.value);
    if (ga.a2) ga.a3 = check_a3_faces(nm, ga.faces);
  }
  return ga;
}

namespace detail {

inline std::string vec_to_string(const VecR& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

inline std::string set_to_string(const ActionSet& s) {
  std::string out = "{";
  bool first = true;
  for (int a : s) {
    if (!first) out += ",";
    out += std::to_string(a);
    first = false;
  }
  return out + "}";
}

}  // namespace detail

// Static propositions for normalized games, each evaluated exactly with a
// witness in the detail string. A failing applicable check means either a
// solver bug or a violated hypothesis.
inline StructureReport check_structure(const PayoffMatrix& a_norm,
                                       const GameAnalysis& ga_norm) {
  StructureReport rep;
  const int n = a_norm.rows(), m = a_norm.cols();
  const Rational v = ga_norm.value;
  const bool a12 = ga_norm.a1 && ga_norm.a2;

  {
    StructureCheck c{"existence_of_one_vector", ga_norm.a1, false, ""};
    if (c.applicable) {
      int count = 0, where = 0;
      for (int j = 1; j <= m; ++j)
        if (is_constant_column(a_norm.column(j)) ==
            std::optional<Rational>(v)) {
          ++count;
          where = j;
        }
      c.pass = (count == 1 && where == 1);
      c.detail = "constant columns at value: " + std::to_string(count);
    }
    rep.checks.push_back(std::move(c));
  }
  {
    StructureCheck c{"value_game_minus_1", ga_norm.a1 && m >= 2, false, ""};
    if (c.applicable) {
      std::vector<int> rest;
      for (int j = 2; j <= m; ++j) rest.push_back(j);
      Rational v1 = reduced_game_value(a_norm, ActionSet(rest));
      c.pass = v1 > v;
      c.detail = "v_{-1}=" + to_string(v1) + " vs v=" + to_string(v);
    }
    rep.checks.push_back(std::move(c));
  }
  {
    StructureCheck c{"unique_NE_player2", ga_norm.a1, false, ""};
    if (c.applicable) {
      VecR e1 = VecR::Zero(m);
      e1[0] = 1;
      c.pass = ga_norm.ne_y.is_singleton() && ga_norm.ne_y.vertices()[0] == e1;
      c.detail = "|NE_y vertices|=" +
                 std::to_string(ga_norm.ne_y.vertices().size());
    }
    rep.checks.push_back(std::move(c));
  }
  {
    StructureCheck c{"one_component_less_v", a12, false, ""};
    if (c.applicable) {
      c.pass = true;
      for (int j = 2; j <= m; ++j) {
        VecR col = a_norm.column(j);
        bool has_less = false;
        for (Eigen::Index i = 0; i < col.size(); ++i)
          if (col[i] < v) has_less = true;
        if (!has_less) {
          c.pass = false;
          c.detail = "column " + std::to_string(j) + " has no entry below v";
          break;
        }
      }
    }
    rep.checks.push_back(std::move(c));
  }
  {
    StructureCheck c{"at_least_one_boundary", a12 && m >= 2, false, ""};
    if (c.applicable) {
      c.pass = true;
      for (const auto& f : ga_norm.faces)
        if (f.columns.size() == m) {
          c.pass = false;
          c.detail = "face I=[m] is nonempty";
        }
      if (c.pass) c.detail = "no face with I=[m]";
    }
    rep.checks.push_back(std::move(c));
  }
  {
    StructureCheck c{"reduced_ne", a12 && m >= 2, false, ""};
    if (c.applicable) {
      c.pass = true;
      for (const auto& f : ga_norm.faces) {
        if (f.columns.size() < 2 || f.columns.size() == m) continue;
        std::vector<int> rest;
        for (int j : f.columns)
          if (j != 1) rest.push_back(j);
        auto sub = submatrix(a_norm, ActionSet(rest));
        GameAnalysis red = solve_game(sub.matrix);
        // A convex subset of the simplex boundary shares a zero coordinate.
        bool on_boundary = false;
        for (int i = 0; i < n && !on_boundary; ++i) {
          bool all_zero = true;
          for (const auto& vert : red.ne_x.vertices())
            if (vert[i] != 0) all_zero = false;
          on_boundary = all_zero;
        }
        if (!on_boundary) {
          c.pass = false;
          c.detail = "reduced game for I=" + detail::set_to_string(f.columns) +
                     " has an interior equilibrium";
          break;
        }
      }
      if (c.pass) c.detail = "all reduced equilibria on the simplex boundary";
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

}  // namespace fplab
