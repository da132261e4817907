#pragma once

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fplab/rational.hpp"

namespace fplab {

using MatR = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VecR = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Nonempty sorted set of 1-based action indices. All indices that cross the
// public API are 1-based, matching the usual game-theoretic convention.
class ActionSet {
 public:
  ActionSet() = default;
  explicit ActionSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()),
                   indices_.end());
    if (indices_.empty()) throw std::invalid_argument("empty action set");
    if (indices_.front() < 1) throw std::invalid_argument("actions are 1-based");
  }

  static ActionSet full(int count) {
    std::vector<int> v(count);
    for (int i = 0; i < count; ++i) v[i] = i + 1;
    return ActionSet(std::move(v));
  }

  static ActionSet from_mask(std::uint32_t mask) {
    std::vector<int> v;
    for (int i = 0; i < 32; ++i)
      if (mask & (1u << i)) v.push_back(i + 1);
    return ActionSet(std::move(v));
  }

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool contains(int a) const {
    return std::binary_search(indices_.begin(), indices_.end(), a);
  }
  int lowest() const { return indices_.front(); }
  int highest() const { return indices_.back(); }
  int at(int i) const { return indices_.at(i); }

  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (int a : indices_) m |= (1u << (a - 1));
    return m;
  }

  bool operator==(const ActionSet& o) const = default;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  std::vector<int> indices_;
};

// Probability vector over a player's actions: nonnegative entries summing to
// exactly 1. The no-prior "zero vector" state is not a MixedStrategy; APIs
// that admit it take std::optional<MixedStrategy> with nullopt for zero.
class MixedStrategy {
 public:
  explicit MixedStrategy(VecR weights) : weights_(std::move(weights)) {
    if (weights_.size() == 0)
      throw std::invalid_argument("empty strategy vector");
    Rational sum = 0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < 0)
        throw std::invalid_argument("negative strategy weight");
      sum += weights_[i];
    }
    if (sum != 1) throw std::invalid_argument("strategy weights must sum to 1");
  }

  static MixedStrategy uniform(int dim) {
    VecR w(dim);
    for (int i = 0; i < dim; ++i) w[i] = Rational(1, dim);
    return MixedStrategy(std::move(w));
  }

  static MixedStrategy pure(int dim, int action_1based) {
    if (action_1based < 1 || action_1based > dim)
      throw std::invalid_argument("pure action out of range");
    VecR w = VecR::Zero(dim);
    w[action_1based - 1] = 1;
    return MixedStrategy(std::move(w));
  }

  const VecR& weights() const { return weights_; }
  int dim() const { return static_cast<int>(weights_.size()); }
  // 1-based component access, matching [x]_i notation.
  const Rational& at(int i) const { return weights_(i - 1); }

  bool operator==(const MixedStrategy& o) const {
    return weights_ == o.weights_;
  }

 private:
  VecR weights_;
};

using ZeroOr = std::optional<MixedStrategy>;  // nullopt = extended zero vector

// n x m payoff matrix of Player 1 (Player 2 gets the negative). Columns c_i
// and rows r_j use 1-based indices in the accessors.
class PayoffMatrix {
 public:
  explicit PayoffMatrix(MatR entries) : a_(std::move(entries)) {
    if (a_.rows() < 1 || a_.cols() < 1)
      throw std::invalid_argument("payoff matrix must be at least 1x1");
  }

  static PayoffMatrix from_rows(
      const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty() || rows[0].empty())
      throw std::invalid_argument("payoff matrix must be at least 1x1");
    MatR a(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size())
        throw std::invalid_argument("ragged payoff matrix");
      for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
    }
    return PayoffMatrix(std::move(a));
  }

  int rows() const { return static_cast<int>(a_.rows()); }  // n
  int cols() const { return static_cast<int>(a_.cols()); }  // m

  VecR column(int i_1based) const {
    check_col(i_1based);
    return a_.col(i_1based - 1);
  }
  VecR row(int j_1based) const {
    check_row(j_1based);
    return a_.row(j_1based - 1).transpose();
  }
  const Rational& entry(int row_1based, int col_1based) const {
    check_row(row_1based);
    check_col(col_1based);
    return a_(row_1based - 1, col_1based - 1);
  }

  const MatR& mat() const { return a_; }

  bool operator==(const PayoffMatrix& o) const {
    return a_.rows() == o.a_.rows() && a_.cols() == o.a_.cols() && a_ == o.a_;
  }

 private:
  void check_row(int j) const {
    if (j < 1 || j > rows()) throw std::out_of_range("row index out of range");
  }
  void check_col(int i) const {
    if (i < 1 || i > cols()) throw std::out_of_range("column index out of range");
  }
  MatR a_;
};

// Column-selected submatrix A_I with the map back to original column indices.
struct Submatrix {
  PayoffMatrix matrix;
  std::vector<int> original_columns;  // original_columns[j] = source of col j+1
};

inline Submatrix submatrix(const PayoffMatrix& a, const ActionSet& columns) {
  std::vector<int> keep;
  for (int c : columns) {
    if (c < 1 || c > a.cols())
      throw std::out_of_range("submatrix column index out of range");
    keep.push_back(c);
  }
  MatR sub(a.rows(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j)
    sub.col(j) = a.mat().col(keep[j] - 1);
  return Submatrix{PayoffMatrix(std::move(sub)), std::move(keep)};
}

inline std::optional<Rational> is_constant_column(const VecR& column) {
  if (column.size() == 0) throw std::invalid_argument("empty column");
  for (Eigen::Index i = 1; i < column.size(); ++i)
    if (column[i] != column[0]) return std::nullopt;
  return column[0];
}

// Exact x^T A y.
inline Rational payoff(const PayoffMatrix& a, const MixedStrategy& x,
                       const MixedStrategy& y) {
  if (x.dim() != a.rows() || y.dim() != a.cols())
    throw std::invalid_argument("payoff: dimension mismatch");
  Rational out = (x.weights().transpose() * a.mat() * y.weights())(0, 0);
  return out;
}

inline ActionSet argmax_set(const VecR& v) {
  Rational best = v[0];
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > best) best = v[i];
  std::vector<int> ids;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] == best) ids.push_back(static_cast<int>(i) + 1);
  return ActionSet(std::move(ids));
}

inline ActionSet argmin_set(const VecR& v) { return argmax_set(VecR(-v)); }

// brx: argmax_i r_i^T y, extended by brx(0_m) = [n].
inline ActionSet best_response_row(const PayoffMatrix& a, const ZeroOr& y) {
  if (!y) return ActionSet::full(a.rows());
  if (y->dim() != a.cols())
    throw std::invalid_argument("best_response_row: dimension mismatch");
  VecR scores = a.mat() * y->weights();
  return argmax_set(scores);
}

// bry: argmin_j c_j^T x, extended by bry(0_n) = [m].
inline ActionSet best_response_col(const PayoffMatrix& a, const ZeroOr& x) {
  if (!x) return ActionSet::full(a.cols());
  if (x->dim() != a.rows())
    throw std::invalid_argument("best_response_col: dimension mismatch");
  VecR scores = a.mat().transpose() * x->weights();
  return argmin_set(scores);
}

}  // namespace fplab
