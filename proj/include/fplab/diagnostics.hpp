#pragma once

#include <cmath>
#include <string>

#include "fplab/assumptions.hpp"
#include "fplab/fp.hpp"

namespace fplab {

// Exact squared Euclidean distance from a strategy to NE_x.
inline Rational squared_dist_to_ne_x(const VecR& x, const GameAnalysis& ga) {
  return squared_distance(x, ga.ne_x);
}

// Euclidean distance from (x, y) to NE = NE_x x NE_y. Projections are exact;
// floating point enters only at the final square root.
inline double dist_to_ne(const VecR& x, const VecR& y, const GameAnalysis& ga) {
  Rational d2 = squared_distance(x, ga.ne_x) + squared_distance(y, ga.ne_y);
  return std::sqrt(to_double(d2));
}

struct VisitCounts {
  std::vector<long long> x1_yi;  // steps in X_1 x Y_i per Player-1 action i
  std::vector<long long> plays_p1, plays_p2;
  long long min_x1_yi() const {
    long long m = x1_yi.empty() ? 0 : x1_yi[0];
    for (long long c : x1_yi) m = std::min(m, c);
    return m;
  }
};

inline VisitCounts visit_counts(const Trajectory& traj) {
  return VisitCounts{traj.visit_x1_yi, traj.play_counts1, traj.play_counts2};
}

struct LemmaViolation {
  std::string lemma;
  long long step;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaViolation> violations;
  long long steps_checked = 0;
  bool ok() const { return violations.empty(); }
};

// Trajectory-level invariant scan: best-response membership, the inertia
// lemma, interior instability and conditional instability. Requires an
// undecimated trajectory of a normalized game satisfying the geometric
// conditions; the interior-instability clause additionally needs k1 = 0.
inline LemmaReport check_lemmas(const Trajectory& traj,
                                const GameAnalysis& ga) {
  if (!traj.is_complete())
    throw std::invalid_argument("lemma checks need an undecimated trajectory");
  if (!ga.a1 || !ga.a2)
    throw std::invalid_argument("lemma checks require the A1/A2 hypotheses");
  LemmaReport rep;
  rep.steps_checked = traj.steps;
  const std::uint32_t full1 = ActionSet::full(traj.n).mask();
  const auto& recs = traj.records;

  for (const auto& r : recs) {
    if (r.p_action == 0) continue;  // final record
    if (!((r.br1_mask >> (r.p_action - 1)) & 1u))
      rep.violations.push_back(
          {"br_membership", r.k, "P1 action outside BR set"});
    if (!((r.br2_mask >> (r.q_action - 1)) & 1u))
      rep.violations.push_back(
          {"br_membership", r.k, "P2 action outside BR set"});
  }

  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    const auto& cur = recs[i];
    const auto& nxt = recs[i + 1];
    if (cur.in_intr_x1() && cur.q_action == 1 &&
        nxt.br1_mask != cur.br1_mask)
      rep.violations.push_back(
          {"inertia", cur.k, "P1 BR set changed after constant-column play"});
  }

  bool k1_zero = traj.records.empty() ? false : !recs.front().x_hat;
  if (k1_zero) {
    long long first_outside = -1;
    for (const auto& r : recs) {
      if (!r.x_hat) continue;  // zero-state
      if (first_outside < 0 && !r.in_x1()) first_outside = r.k;
      if (first_outside >= 0 && r.k > first_outside && r.in_x1() &&
          r.br1_mask == full1)
        rep.violations.push_back({"interior_instability", r.k,
                                  "revisited X_1 with all rows tied"});
    }
  }

  // Conditional instability: a maximal stay in intr(X_1) x Y_i^c that is
  // followed by another step must exit into intr(X_1)^c x Y_i^c.
  for (int i = 1; i <= traj.n; ++i) {
    for (std::size_t r = 0; r + 1 < recs.size(); ++r) {
      bool p = recs[r].in_intr_x1() && !recs[r].in_y(i);
      if (!p) continue;
      const auto& nxt = recs[r + 1];
      bool p_next = nxt.in_intr_x1() && !nxt.in_y(i);
      if (!p_next && (nxt.in_intr_x1() || nxt.in_y(i)))
        rep.violations.push_back(
            {"conditional_instability", nxt.k,
             "exit from intr(X_1) x Y_" + std::to_string(i) +
                 "^c not into intr(X_1)^c x Y_i^c"});
    }
  }
  return rep;
}

struct BandCrossings {
  long long above_high = 0;  // entries into { [x]_2 >= b - slack/k }
  long long below_low = 0;   // entries into { [x]_2 <= a + slack/k }
};

struct ConvergenceReport {
  long long window_start = 0, window_end = 0;
  // Certified lower bound for the max pairwise distance of x_hat over the
  // window (subsampled pairs plus per-coordinate ranges) and an upper bound
  // from the coordinate ranges.
  double tail_diameter_x = 0;
  double tail_diameter_x_upper = 0;
  std::vector<double> coord_range_x;
  std::vector<std::pair<long long, double>> dist_to_ne_series;
  std::vector<long long> visit_counts;
  // Filled for oscillation-rule runs via attach_band_crossings.
  std::optional<BandCrossings> band_crossings;
  double threshold = 0.1;
  double settle_threshold = 0.01;
  enum class Verdict { oscillating, settling, inconclusive } verdict =
      Verdict::inconclusive;
  std::string verdict_name() const {
    switch (verdict) {
      case Verdict::oscillating: return "oscillating";
      case Verdict::settling: return "settling";
      case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
  }
};

// Heuristic oscillation/settling verdict over the tail window. There is no
// canonical quantitative convergence criterion; thresholds are engineering
// choices and are carried in the report next to the raw numbers.
inline ConvergenceReport oscillation_verdict(
    const Trajectory& traj, double window_fraction = 0.5,
    double threshold = 0.1, const GameAnalysis* ga = nullptr) {
  if (traj.steps < 100)
    throw std::invalid_argument("oscillation verdict needs at least 100 steps");
  ConvergenceReport rep;
  rep.threshold = threshold;
  rep.settle_threshold = threshold / 10.0;
  rep.window_end = traj.steps;
  rep.window_start =
      traj.steps - static_cast<long long>(traj.steps * window_fraction);
  rep.visit_counts = traj.visit_x1_yi;

  std::vector<std::pair<long long, std::vector<double>>> tail;
  for (const auto& r : traj.records) {
    if (r.k < rep.window_start || !r.x_hat) continue;
    std::vector<double> x(r.x_hat->size());
    for (Eigen::Index i = 0; i < r.x_hat->size(); ++i)
      x[i] = to_double((*r.x_hat)[i]);
    tail.emplace_back(r.k, std::move(x));
  }
  if (tail.empty()) return rep;

  const std::size_t dim = tail[0].second.size();
  std::vector<double> lo(dim, 1e300), hi(dim, -1e300);
  for (const auto& [k, x] : tail)
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  double range_sq = 0, max_range = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    double r = hi[i] - lo[i];
    rep.coord_range_x.push_back(r);
    range_sq += r * r;
    max_range = std::max(max_range, r);
  }
  rep.tail_diameter_x_upper = std::sqrt(range_sq);

  // Pairwise diameter over an even subsample.
  const std::size_t cap = 1500;
  std::size_t stride = std::max<std::size_t>(1, tail.size() / cap);
  std::vector<const std::vector<double>*> sample;
  for (std::size_t i = 0; i < tail.size(); i += stride)
    sample.push_back(&tail[i].second);
  double diam = 0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      double d2 = 0;
      for (std::size_t c = 0; c < dim; ++c) {
        double d = (*sample[i])[c] - (*sample[j])[c];
        d2 += d * d;
      }
      diam = std::max(diam, d2);
    }
  rep.tail_diameter_x = std::max(std::sqrt(diam), max_range);

  if (ga) {
    const std::size_t series_cap = 257;
    std::size_t sstride = std::max<std::size_t>(1, traj.records.size() / series_cap);
    for (std::size_t i = 0; i < traj.records.size(); i += sstride) {
      const auto& r = traj.records[i];
      if (!r.x_hat || !r.y_hat) continue;
      rep.dist_to_ne_series.emplace_back(r.k,
                                         dist_to_ne(*r.x_hat, *r.y_hat, *ga));
    }
    const auto& fin = traj.final_record();
    if (fin.x_hat && fin.y_hat &&
        (rep.dist_to_ne_series.empty() ||
         rep.dist_to_ne_series.back().first != fin.k))
      rep.dist_to_ne_series.emplace_back(fin.k,
                                         dist_to_ne(*fin.x_hat, *fin.y_hat, *ga));
  }

  if (rep.tail_diameter_x >= threshold)
    rep.verdict = ConvergenceReport::Verdict::oscillating;
  else if (rep.tail_diameter_x_upper <= rep.settle_threshold)
    rep.verdict = ConvergenceReport::Verdict::settling;
  else
    rep.verdict = ConvergenceReport::Verdict::inconclusive;
  return rep;
}

// Exact parity-rule landmark check: [x_hat(2^n)]_2 == 1/2 and
// [x_hat(2^n + 2^(n-1))]_2 == 2/3 for 1 <= n <= n_max. The trajectory must
// contain records at those steps (checkpoints or full storage).
inline bool verify_parity(const Trajectory& traj, int n_max,
                          std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (traj.n != 2) throw std::invalid_argument("parity check needs 2 rows");
  if (traj.config) {
    const FPConfig& cfg = *traj.config;
    bool zero_game = true;
    for (int i = 1; i <= cfg.matrix.rows(); ++i)
      for (int j = 1; j <= cfg.matrix.cols(); ++j)
        if (cfg.matrix.entry(i, j) != 0) zero_game = false;
    if (!zero_game || cfg.tiebreak_p1.kind != TieBreakSpec::Kind::parity ||
        cfg.k1 != 0)
      throw std::invalid_argument(
          "parity landmarks require the zero game with the parity rule and "
          "no Player-1 prior");
  }
  long long needed = (1ll << n_max) + (1ll << (n_max - 1));
  if (traj.steps < needed)
    throw std::invalid_argument("trajectory too short for requested n_max");
  for (int n = 1; n <= n_max; ++n) {
    for (auto [k, expect] :
         {std::pair<long long, Rational>{1ll << n, Rational(1, 2)},
          {(1ll << n) + (1ll << (n - 1)), Rational(2, 3)}}) {
      const StepRecord* rec = traj.record_at(k);
      if (!rec || !rec->x_hat)
        throw std::invalid_argument("no record at step " + std::to_string(k));
      if ((*rec->x_hat)[1] != expect)
        return fail("at k=" + std::to_string(k) + ": [x]_2=" +
                    to_string((*rec->x_hat)[1]) + " expected " +
                    to_string(expect));
    }
  }
  return true;
}

// Counts, over the final half of an undecimated run, how often the second
// own-action frequency enters the upper and lower oscillation bands
// b - slack/k and a + slack/k. Exact rational comparisons.
inline BandCrossings count_band_crossings(const Trajectory& traj,
                                          const Rational& a, const Rational& b,
                                          const Rational& slack) {
  if (!traj.is_complete())
    throw std::invalid_argument("crossing counts need an undecimated trajectory");
  BandCrossings out;
  bool was_high = false, was_low = false;
  for (const auto& r : traj.records) {
    if (!r.x_hat || r.k < traj.steps / 2) continue;
    const Rational& x2 = (*r.x_hat)[1];
    Rational k(r.k);
    bool high = x2 >= b - slack / k;
    bool low = x2 <= a + slack / k;
    if (high && !was_high) ++out.above_high;
    if (low && !was_low) ++out.below_low;
    was_high = high;
    was_low = low;
  }
  return out;
}

inline ConvergenceReport attach_band_crossings(ConvergenceReport rep,
                                               const Trajectory& traj,
                                               const Rational& a,
                                               const Rational& b,
                                               const Rational& slack) {
  rep.band_crossings = count_band_crossings(traj, a, b, slack);
  return rep;
}

// Empirical evidence for reduced-game attraction: the smallest recorded
// distance from x_hat to the Player-1 equilibrium set of A_{I \ J}, where J
// must be exactly the span{1}-columns inside I.
inline double reduced_subsequence_gap(const Trajectory& traj,
                                      const PayoffMatrix& a,
                                      const ActionSet& columns_i,
                                      const ActionSet& columns_j) {
  std::vector<int> expect_j;
  for (int i : columns_i)
    if (is_constant_column(a.column(i))) expect_j.push_back(i);
  if (columns_j.indices() != expect_j)
    throw std::invalid_argument(
        "J must be the span{1_n} columns inside I");
  if (columns_i == columns_j)
    throw std::invalid_argument("reduced-game gap requires I != J");

  std::vector<int> rest;
  for (int i : columns_i)
    if (!columns_j.contains(i)) rest.push_back(i);
  auto sub = submatrix(a, ActionSet(rest));
  GameAnalysis red = solve_game(sub.matrix);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.records) {
    if (!r.x_hat) continue;
    double d = std::sqrt(to_double(squared_distance(*r.x_hat, red.ne_x)));
    best = std::min(best, d);
  }
  return best;
}

}  // namespace fplab
