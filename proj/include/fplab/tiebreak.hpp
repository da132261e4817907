#pragma once

#include <memory>
#include <string>

#include "fplab/game.hpp"
#include "fplab/rng.hpp"

namespace fplab {

// Everything a tie-breaking rule may look at when selecting among tied best
// responses: the step index, both players' cumulative weight vectors (own and
// opponent empirical frequencies are cum/total when total > 0; total == 0 is
// the no-prior zero state), and the exact best-response set.
struct TieBreakContext {
  long long step;
  const VecR& own_cum;
  const Rational& own_total;
  const VecR& opp_cum;
  const Rational& opp_total;
  const ActionSet& best;
};

class TieBreaker {
 public:
  virtual ~TieBreaker() = default;
  // Must return an action inside ctx.best; the engine aborts otherwise.
  virtual int pick(const TieBreakContext& ctx, RngStream& rng) = 0;
  virtual void validate(int own_actions) const {}
  virtual std::string name() const = 0;
};

class LowestIndexRule final : public TieBreaker {
 public:
  int pick(const TieBreakContext& ctx, RngStream&) override {
    return ctx.best.lowest();
  }
  std::string name() const override { return "lowest"; }
};

class HighestIndexRule final : public TieBreaker {
 public:
  int pick(const TieBreakContext& ctx, RngStream&) override {
    return ctx.best.highest();
  }
  std::string name() const override { return "highest"; }
};

class UniformRandomRule final : public TieBreaker {
 public:
  int pick(const TieBreakContext& ctx, RngStream& rng) override {
    return ctx.best.at(static_cast<int>(rng.below(ctx.best.size())));
  }
  std::string name() const override { return "uniform"; }
};

// One-bit memory oscillator: memory flips to 0 once the own second-action
// frequency reaches b and back to 1 once it falls to a; memory 0 plays
// action 1, memory 1 plays action 2. m(0) = 1.
class OneBitMemoryRule final : public TieBreaker {
 public:
  OneBitMemoryRule(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    if (!(0 < a_ && a_ < b_ && b_ < 1))
      throw std::invalid_argument("one-bit rule needs 0 < a < b < 1");
  }

  void validate(int own_actions) const override {
    if (own_actions != 2)
      throw std::invalid_argument("one-bit rule requires a 2-action player");
  }

  int pick(const TieBreakContext& ctx, RngStream&) override {
    if (ctx.step > 0) {
      Rational x2 = ctx.own_total > 0 ? Rational(ctx.own_cum[1] / ctx.own_total)
                                      : Rational(0);
      if (x2 >= b_)
        memory_ = 0;
      else if (x2 <= a_)
        memory_ = 1;
    }
    int want = memory_ == 0 ? 1 : 2;
    return ctx.best.contains(want) ? want : ctx.best.lowest();
  }

  std::string name() const override {
    return "onebit:" + to_string(a_) + "," + to_string(b_);
  }

 private:
  Rational a_, b_;
  int memory_ = 1;
};

// Memoryless parity rule: reduce the own second-action frequency p/q to
// lowest terms and play action 2 when p is odd, action 1 when p is even
// (with the conventions 0 -> action 2 and 1 -> action 1).
class ParityRule final : public TieBreaker {
 public:
  void validate(int own_actions) const override {
    if (own_actions != 2)
      throw std::invalid_argument("parity rule requires a 2-action player");
  }

  int pick(const TieBreakContext& ctx, RngStream&) override {
    Rational x2 = ctx.own_total > 0 ? Rational(ctx.own_cum[1] / ctx.own_total)
                                    : Rational(0);
    int want;
    if (x2 == 0)
      want = 2;
    else if (x2 == 1)
      want = 1;
    else
      want = rational_num(x2) % 2 != 0 ? 2 : 1;
    return ctx.best.contains(want) ? want : ctx.best.lowest();
  }

  std::string name() const override { return "parity"; }
};

struct TieBreakSpec {
  enum class Kind { lowest, highest, uniform, one_bit, parity };
  Kind kind = Kind::lowest;
  Rational a{1, 4}, b{3, 4};  // one-bit thresholds

  // Accepts: lowest | highest | uniform | parity | onebit:a,b
  static TieBreakSpec parse(const std::string& text) {
    TieBreakSpec spec;
    if (text == "lowest") {
      spec.kind = Kind::lowest;
    } else if (text == "highest") {
      spec.kind = Kind::highest;
    } else if (text == "uniform") {
      spec.kind = Kind::uniform;
    } else if (text == "parity") {
      spec.kind = Kind::parity;
    } else if (text.rfind("onebit", 0) == 0) {
      spec.kind = Kind::one_bit;
      if (text.size() > 6) {
        if (text[6] != ':')
          throw std::invalid_argument("bad one-bit spec: " + text);
        auto rest = text.substr(7);
        auto comma = rest.find(',');
        if (comma == std::string::npos)
          throw std::invalid_argument("one-bit spec needs two thresholds");
        spec.a = parse_rational(rest.substr(0, comma));
        spec.b = parse_rational(rest.substr(comma + 1));
      }
    } else {
      throw std::invalid_argument("unknown tie-break rule: " + text);
    }
    return spec;
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::lowest: return "lowest";
      case Kind::highest: return "highest";
      case Kind::uniform: return "uniform";
      case Kind::parity: return "parity";
      case Kind::one_bit:
        return "onebit:" + fplab::to_string(a) + "," + fplab::to_string(b);
    }
    return "?";
  }

  bool operator==(const TieBreakSpec& o) const = default;
};

inline std::unique_ptr<TieBreaker> make_tiebreaker(const TieBreakSpec& spec) {
  using K = TieBreakSpec::Kind;
  switch (spec.kind) {
    case K::lowest: return std::make_unique<LowestIndexRule>();
    case K::highest: return std::make_unique<HighestIndexRule>();
    case K::uniform: return std::make_unique<UniformRandomRule>();
    case K::parity: return std::make_unique<ParityRule>();
    case K::one_bit: return std::make_unique<OneBitMemoryRule>(spec.a, spec.b);
  }
  throw std::logic_error("unreachable");
}

}  // namespace fplab
