#pragma once

#include <map>

#include "fplab/game.hpp"

namespace fplab {

// Facts a library game is expected to reproduce; the verify suite fails
// loudly on any mismatch with the solver output.
struct ExpectedFacts {
  std::optional<Rational> value;
  std::optional<std::vector<VecR>> ne_x_vertices;  // unordered
  std::optional<std::vector<VecR>> ne_y_vertices;
  std::optional<bool> a1, a2, a3;
};

struct GameLibraryEntry {
  std::string name;
  PayoffMatrix matrix;
  std::string provenance;  // short note on where the game comes from
  ExpectedFacts expected;
};

namespace detail {

inline PayoffMatrix make_matrix(
    const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Rational>> parsed;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (const auto& tok : r) row.push_back(parse_rational(tok));
    parsed.push_back(std::move(row));
  }
  return PayoffMatrix::from_rows(parsed);
}

inline VecR make_vec(const std::vector<std::string>& toks) {
  VecR v(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) v[i] = parse_rational(toks[i]);
  return v;
}

}  // namespace detail

inline const std::vector<GameLibraryEntry>& game_library() {
  static const std::vector<GameLibraryEntry> entries = [] {
    using detail::make_matrix;
    using detail::make_vec;
    std::vector<GameLibraryEntry> lib;

    {
      GameLibraryEntry e{"zz_mat", make_matrix({{"0"}, {"0"}}),
                         "2x1 zero game; every profile is an equilibrium",
                         {}};
      e.expected.value = 0;
      e.expected.a1 = true;
      e.expected.a2 = false;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{"2by2_basic", make_matrix({{"1", "0"}, {"0", "1"}}),
                         "matching-pennies-style game with a unique NE", {}};
      e.expected.value = Rational(1, 2);
      e.expected.ne_x_vertices = {make_vec({"1/2", "1/2"})};
      e.expected.a1 = false;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{
          "2by2_mult_ne",
          make_matrix({{"1", "0", "1/4"}, {"0", "1", "1/4"}}),
          "2by2_basic plus the constant column (1/4,1/4)", {}};
      e.expected.value = Rational(1, 4);
      e.expected.ne_x_vertices = {make_vec({"1/4", "3/4"}),
                                  make_vec({"3/4", "1/4"})};
      e.expected.a1 = true;
      e.expected.a2 = true;
      e.expected.a3 = true;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{"non_converge_example",
                         make_matrix({{"1/8", "1", "0", "0"},
                                      {"1/8", "0", "1", "0"},
                                      {"1/8", "0", "0", "1"}}),
                         "3x4 game whose FP cannot converge pointwise", {}};
      e.expected.value = Rational(1, 8);
      e.expected.ne_x_vertices = {make_vec({"3/4", "1/8", "1/8"}),
                                  make_vec({"1/8", "3/4", "1/8"}),
                                  make_vec({"1/8", "1/8", "3/4"})};
      e.expected.ne_y_vertices = {make_vec({"1", "0", "0", "0"})};
      e.expected.a1 = true;
      e.expected.a2 = true;
      e.expected.a3 = true;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{"bd_counter_ex",
                         make_matrix({{"3/10", "0", "2/5", "2/5"},
                                      {"3/10", "1", "0", "1/2"},
                                      {"3/10", "1", "1/2", "0"}}),
                         "satisfies the geometric conditions but not the "
                         "boundary-instability condition",
                         {}};
      e.expected.value = Rational(3, 10);
      e.expected.ne_x_vertices = {make_vec({"1/3", "1/3", "1/3"}),
                                  make_vec({"7/10", "13/50", "1/25"}),
                                  make_vec({"7/10", "1/25", "13/50"})};
      e.expected.a1 = true;
      e.expected.a2 = true;
      e.expected.a3 = false;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{"conj_exp",
                         make_matrix({{"1/3", "4", "0", "4/9"},
                                      {"1/3", "0", "1", "0"},
                                      {"1/3", "0", "0", "5/9"}}),
                         "reduced-game attraction experiment",
                         {}};
      e.expected.value = Rational(1, 3);
      e.expected.a1 = true;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{"converging_example",
                         make_matrix({{"1/8", "1", "0", "0"},
                                      {"1/8", "0", "1", "0"},
                                      {"0", "0", "0", "1"}}),
                         "segment-shaped NE set; FP often settles near the "
                         "midpoint",
                         {}};
      e.expected.a1 = false;
      e.expected.a2 = true;
      lib.push_back(std::move(e));
    }
    {
      GameLibraryEntry e{
          "without_a2",
          make_matrix({{"1/24", "0", "0", "1/8", "0", "1/8"},
                       {"1/24", "1", "0", "1/8", "1/8", "0"},
                       {"1/24", "0", "1", "0", "1/8", "1/8"}}),
          "NE set touches the simplex boundary; convergence depends on the "
          "initialization",
          {}};
      e.expected.value = Rational(1, 24);
      e.expected.a1 = true;
      e.expected.a2 = false;
      lib.push_back(std::move(e));
    }
    return lib;
  }();
  return entries;
}

inline const GameLibraryEntry* find_game(const std::string& name) {
  for (const auto& e : game_library())
    if (e.name == name) return &e;
  return nullptr;
}

inline std::vector<std::string> game_names() {
  std::vector<std::string> names;
  for (const auto& e : game_library()) names.push_back(e.name);
  return names;
}

}  // namespace fplab
