#pragma once

#include <algorithm>
#include <vector>

#include "fplab/tiebreak.hpp"

namespace fplab {

struct TrajectoryOptions {
  // Store every s-th step; 0 keeps only checkpoints, BR-set changes and the
  // endpoints. Needed for runs past ~1e6 steps where full exact records are
  // too heavy.
  long long decimate = 1;
  std::vector<long long> checkpoints;  // always-recorded steps
  bool record_br_changes = true;
};

struct FPConfig {
  PayoffMatrix matrix;
  Rational k1{0}, k2{0};
  std::optional<MixedStrategy> x0, y0;  // required exactly when the weight > 0
  long long steps = 0;
  TieBreakSpec tiebreak_p1, tiebreak_p2;
  std::uint64_t seed = 0;
  TrajectoryOptions record;

  FPConfig(PayoffMatrix m) : matrix(std::move(m)) {}
};

// Cumulative simulator state. g and h are maintained incrementally and must
// equal A^T u and A w at every step; tests recompute them from scratch.
struct FPState {
  long long k = 0;
  VecR u, w;  // (k+k1) x_hat(k), (k+k2) y_hat(k)
  VecR g, h;  // g = A^T u drives Player 2, h = A w drives Player 1
  Rational total1, total2;
  std::vector<long long> counts1, counts2;  // pure-action play counts

  std::optional<VecR> x_hat() const {
    if (total1 == 0) return std::nullopt;
    VecR x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) x[i] = u[i] / total1;
    return x;
  }
  std::optional<VecR> y_hat() const {
    if (total2 == 0) return std::nullopt;
    VecR y(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) y[i] = w[i] / total2;
    return y;
  }
};

struct StepRecord {
  long long k = 0;
  int p_action = 0, q_action = 0;  // actions taken at step k; 0 on the final record
  std::uint32_t br1_mask = 0;      // Player 1 best responses (bits are actions-1)
  std::uint32_t br2_mask = 0;      // Player 2 best responses
  std::optional<VecR> x_hat, y_hat;  // nullopt = zero-state

  // Region labels. in_x1: Player 2's best-response set contains column 1;
  // for normalized games X_1 = NE_x and the strict label is br2 == {1}.
  bool in_x1() const { return (br2_mask & 1u) != 0; }
  bool in_intr_x1() const { return br2_mask == 1u; }
  bool in_y(int j_1based) const { return (br1_mask >> (j_1based - 1)) & 1u; }
  ActionSet face_label() const { return ActionSet::from_mask(br2_mask); }
};

struct Trajectory {
  long long steps = 0;
  int n = 0, m = 0;
  std::optional<FPConfig> config;   // the run's full configuration
  std::vector<StepRecord> records;  // ascending k, possibly decimated
  std::vector<long long> play_counts1, play_counts2;
  // visit_x1_yi[i-1]: number of steps with x_hat in X_1 and y_hat in Y_i.
  std::vector<long long> visit_x1_yi;

  const StepRecord& final_record() const { return records.back(); }

  const StepRecord* record_at(long long k) const {
    auto it = std::lower_bound(
        records.begin(), records.end(), k,
        [](const StepRecord& r, long long key) { return r.k < key; });
    if (it == records.end() || it->k != k) return nullptr;
    return &*it;
  }

  // True when every step 0..steps is present.
  bool is_complete() const {
    return static_cast<long long>(records.size()) == steps + 1;
  }
};

inline void validate_config(const FPConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (cfg.k1 < 0 || cfg.k2 < 0)
    throw std::invalid_argument("prior weights must be nonnegative");
  if ((cfg.k1 > 0) != cfg.x0.has_value())
    throw std::invalid_argument("x0 must be present exactly when k1 > 0");
  if ((cfg.k2 > 0) != cfg.y0.has_value())
    throw std::invalid_argument("y0 must be present exactly when k2 > 0");
  if (cfg.x0 && cfg.x0->dim() != cfg.matrix.rows())
    throw std::invalid_argument("x0 dimension mismatch");
  if (cfg.y0 && cfg.y0->dim() != cfg.matrix.cols())
    throw std::invalid_argument("y0 dimension mismatch");
  if (cfg.matrix.rows() > 31 || cfg.matrix.cols() > 31)
    throw std::invalid_argument("action sets beyond 31 are unsupported");
}

inline FPState fp_init(const FPConfig& cfg) {
  validate_config(cfg);
  FPState s;
  const int n = cfg.matrix.rows(), m = cfg.matrix.cols();
  s.u = VecR::Zero(n);
  s.w = VecR::Zero(m);
  if (cfg.x0)
    for (int i = 0; i < n; ++i) s.u[i] = cfg.k1 * cfg.x0->weights()[i];
  if (cfg.y0)
    for (int j = 0; j < m; ++j) s.w[j] = cfg.k2 * cfg.y0->weights()[j];
  s.g = cfg.matrix.mat().transpose() * s.u;
  s.h = cfg.matrix.mat() * s.w;
  s.total1 = cfg.k1;
  s.total2 = cfg.k2;
  s.counts1.assign(n, 0);
  s.counts2.assign(m, 0);
  return s;
}

class FPEngine {
 public:
  explicit FPEngine(const FPConfig& cfg)
      : cfg_(cfg),
        state_(fp_init(cfg)),
        tb1_(make_tiebreaker(cfg.tiebreak_p1)),
        tb2_(make_tiebreaker(cfg.tiebreak_p2)),
        rng1_(mix_seed(cfg.seed, 1)),
        rng2_(mix_seed(cfg.seed, 2)) {
    tb1_->validate(cfg.matrix.rows());
    tb2_->validate(cfg.matrix.cols());
  }

  const FPState& state() const { return state_; }
  const FPConfig& config() const { return cfg_; }

  // Best responses at the current state. The argmax of h (== A w) is brx of
  // y_hat: positive scaling does not move the argmax, and the zero state
  // yields the full set.
  ActionSet br1() const { return argmax_set(state_.h); }
  ActionSet br2() const { return argmin_set(state_.g); }

  // Advance one simultaneous step: both players respond to the step-k state.
  // Returns the record of the pre-step state together with the actions taken.
  StepRecord step() {
    StepRecord rec = snapshot();
    ActionSet b1 = ActionSet::from_mask(rec.br1_mask);
    ActionSet b2 = ActionSet::from_mask(rec.br2_mask);
    TieBreakContext ctx1{state_.k, state_.u, state_.total1,
                         state_.w, state_.total2, b1};
    int p = tb1_->pick(ctx1, rng1_);
    TieBreakContext ctx2{state_.k, state_.w, state_.total2,
                         state_.u, state_.total1, b2};
    int q = tb2_->pick(ctx2, rng2_);
    if (!b1.contains(p))
      throw std::logic_error("P1 tie-breaker returned action outside BR set");
    if (!b2.contains(q))
      throw std::logic_error("P2 tie-breaker returned action outside BR set");
    rec.p_action = p;
    rec.q_action = q;

    state_.u[p - 1] += 1;
    state_.w[q - 1] += 1;
    state_.g += cfg_.matrix.row(p);     // A^T e_p is row p of A
    state_.h += cfg_.matrix.column(q);  // A e_q is column q of A
    state_.total1 += 1;
    state_.total2 += 1;
    state_.counts1[p - 1] += 1;
    state_.counts2[q - 1] += 1;
    state_.k += 1;
    return rec;
  }

  StepRecord snapshot() const {
    StepRecord rec;
    rec.k = state_.k;
    rec.br1_mask = br1().mask();
    rec.br2_mask = br2().mask();
    rec.x_hat = state_.x_hat();
    rec.y_hat = state_.y_hat();
    return rec;
  }

 private:
  FPConfig cfg_;
  FPState state_;
  std::unique_ptr<TieBreaker> tb1_, tb2_;
  RngStream rng1_, rng2_;
};

// Full run: simulate cfg.steps steps, recording per cfg.record, accumulating
// play and region-visit counts over every step. Deterministic given the seed.
inline Trajectory fp_run(const FPConfig& cfg) {
  FPEngine engine(cfg);
  Trajectory traj;
  traj.steps = cfg.steps;
  traj.n = cfg.matrix.rows();
  traj.m = cfg.matrix.cols();
  traj.config = cfg;
  traj.play_counts1.assign(traj.n, 0);
  traj.play_counts2.assign(traj.m, 0);
  traj.visit_x1_yi.assign(traj.n, 0);

  const auto& opts = cfg.record;
  std::vector<long long> sorted_checkpoints = opts.checkpoints;
  std::sort(sorted_checkpoints.begin(), sorted_checkpoints.end());

  std::uint32_t prev_br1 = 0, prev_br2 = 0;
  for (long long k = 0; k < cfg.steps; ++k) {
    StepRecord rec = engine.step();
    bool zero_state = !rec.x_hat || !rec.y_hat;
    if (!zero_state) {
      for (int i = 1; i <= traj.n; ++i)
        if (rec.in_x1() && rec.in_y(i)) ++traj.visit_x1_yi[i - 1];
    }
    ++traj.play_counts1[rec.p_action - 1];
    ++traj.play_counts2[rec.q_action - 1];

    bool keep = (opts.decimate > 0 && k % opts.decimate == 0) ||
                std::binary_search(sorted_checkpoints.begin(),
                                   sorted_checkpoints.end(), k) ||
                (opts.record_br_changes && k > 0 &&
                 (rec.br1_mask != prev_br1 || rec.br2_mask != prev_br2)) ||
                k == 0;
    prev_br1 = rec.br1_mask;
    prev_br2 = rec.br2_mask;
    if (keep) traj.records.push_back(std::move(rec));
  }
  // Final state record (no actions).
  StepRecord last = engine.snapshot();
  if (last.x_hat && last.y_hat) {
    for (int i = 1; i <= traj.n; ++i)
      if (last.in_x1() && last.in_y(i)) ++traj.visit_x1_yi[i - 1];
  }
  traj.records.push_back(std::move(last));
  return traj;
}

}  // namespace fplab
