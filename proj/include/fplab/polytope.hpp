#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fplab/lp.hpp"

namespace fplab {

struct HalfSpace {
  VecR normal;
  Rational offset;  // normal^T x >= offset
};

struct Hyperplane {
  VecR normal;
  Rational offset;  // normal^T x == offset
};

// Convex polytope in V-representation plus the defining constraints.
// The vertex list coming out of enumerate_vertices is irredundant by
// construction (every basic feasible point is an extreme point).
class Polytope {
 public:
  Polytope() = default;
  Polytope(int ambient_dim, std::vector<VecR> vertices,
           std::vector<HalfSpace> inequalities,
           std::vector<Hyperplane> equalities)
      : ambient_(ambient_dim),
        vertices_(std::move(vertices)),
        ineqs_(std::move(inequalities)),
        eqs_(std::move(equalities)) {}

  // Polytope from its constraint system; vertices enumerated exactly.
  static Polytope from_constraints(int ambient_dim,
                                   std::vector<HalfSpace> inequalities,
                                   std::vector<Hyperplane> equalities) {
    LinearSystem sys;
    sys.eq.resize(equalities.size(), ambient_dim);
    sys.eq_rhs.resize(equalities.size());
    for (std::size_t i = 0; i < equalities.size(); ++i) {
      sys.eq.row(i) = equalities[i].normal.transpose();
      sys.eq_rhs[i] = equalities[i].offset;
    }
    sys.ge.resize(inequalities.size(), ambient_dim);
    sys.ge_rhs.resize(inequalities.size());
    for (std::size_t i = 0; i < inequalities.size(); ++i) {
      sys.ge.row(i) = inequalities[i].normal.transpose();
      sys.ge_rhs[i] = inequalities[i].offset;
    }
    return Polytope(ambient_dim, enumerate_vertices(sys),
                    std::move(inequalities), std::move(equalities));
  }

  int ambient_dim() const { return ambient_; }
  const std::vector<VecR>& vertices() const { return vertices_; }
  const std::vector<HalfSpace>& inequalities() const { return ineqs_; }
  const std::vector<Hyperplane>& equalities() const { return eqs_; }

  bool empty() const { return vertices_.empty(); }
  bool is_singleton() const { return vertices_.size() == 1; }

  bool contains(const VecR& p) const {
    for (const auto& e : eqs_)
      if ((e.normal.transpose() * p)(0, 0) != e.offset) return false;
    for (const auto& h : ineqs_)
      if ((h.normal.transpose() * p)(0, 0) < h.offset) return false;
    return true;
  }

  int affine_dim() const { return affine_dimension(vertices_); }

  bool has_vertex(const VecR& v) const {
    for (const auto& w : vertices_)
      if (w == v) return true;
    return false;
  }

 private:
  int ambient_ = 0;
  std::vector<VecR> vertices_;
  std::vector<HalfSpace> ineqs_;
  std::vector<Hyperplane> eqs_;
};

struct ProjectionResult {
  Rational squared_distance;
  VecR nearest;
};

// Exact Euclidean projection of p onto the polytope: project onto the affine
// hull of every vertex subset, keep candidates inside the polytope, take the
// minimum. The true nearest point is the orthogonal projection onto the
// affine hull of its minimal face, so it is always among the candidates.
// Exponential in the vertex count; desk scale only.
inline ProjectionResult project_onto_polytope(const VecR& p,
                                              const Polytope& poly) {
  const auto& verts = poly.vertices();
  if (verts.empty()) throw std::invalid_argument("projection onto empty polytope");

  std::optional<ProjectionResult> best;
  auto consider = [&](const VecR& q) {
    VecR d = p - q;
    Rational dist2 = (d.transpose() * d)(0, 0);
    if (!best || dist2 < best->squared_distance)
      best = ProjectionResult{dist2, q};
  };

  for (const auto& v : verts) consider(v);

  const int nverts = static_cast<int>(verts.size());
  for (int k = 2; k <= nverts; ++k) {
    detail::for_each_subset(nverts, k, [&](const std::vector<int>& subset) {
      // q = w0 + B lambda with B the edge directions from w0.
      const VecR& w0 = verts[subset[0]];
      MatR basis(p.size(), k - 1);
      for (int i = 1; i < k; ++i) basis.col(i - 1) = verts[subset[i]] - w0;
      MatR gram = basis.transpose() * basis;
      auto lambda = solve_unique(gram, VecR(basis.transpose() * (p - w0)));
      if (!lambda) return;  // affinely dependent subset; smaller one covers it
      VecR q = w0 + basis * (*lambda);
      if (poly.contains(q)) consider(q);
    });
  }
  return *best;
}

inline Rational squared_distance(const VecR& p, const Polytope& poly) {
  return project_onto_polytope(p, poly).squared_distance;
}

}  // namespace fplab
