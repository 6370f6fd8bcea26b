#include <gtest/gtest.h>

#include <bit>

#include "fixtures.hpp"
#include "mscp/engine.hpp"
#include "mscp/error.hpp"
#include "oracle.hpp"

using namespace mscp;

namespace {

Grid grid4(const oracle::Grid4& g) {
  return Grid(GridSize::from_side(4), std::vector<std::uint8_t>(g.begin(), g.end()));
}

const std::vector<oracle::Grid4>& sudoku4() {
  static const auto all = oracle::all_sudoku4();
  return all;
}

}  // namespace

TEST(Engine, SolvesFigurePuzzle) {
  const auto out = solve_puzzle(parse_puzzle(fixtures::kPuzzle17));
  ASSERT_TRUE(out.found());
  EXPECT_EQ(*out.value, parse_grid(fixtures::kGrid));
}

TEST(Engine, CountsFigurePuzzle) {
  const Puzzle p = parse_puzzle(fixtures::kPuzzle17);
  const auto c = count_solutions(p, 10);
  EXPECT_EQ(c.count, 1U);
  EXPECT_FALSE(c.interrupted);
}

TEST(Engine, RemovingAClueGivesTwoSolutions) {
  std::string s = fixtures::kPuzzle17;
  ASSERT_NE(s[9], '.');
  s[9] = '.';  // (2,1)
  EXPECT_EQ(count_solutions(parse_puzzle(s), 2).count, 2U);
  EXPECT_GT(count_solutions(parse_puzzle(s), 1000).count, 2U);
}

TEST(Engine, CountsEmptyFourByFour) {
  EXPECT_EQ(count_solutions(Puzzle::empty(GridSize::from_side(4)), 1000).count, sudoku4().size());
  EXPECT_EQ(sudoku4().size(), 288U);
  const std::vector<std::uint8_t> blank(16, 0);
  EXPECT_EQ(engine::count_completions({4, 0}, blank, 10000).count, oracle::all_latin4().size());
  EXPECT_EQ(oracle::all_latin4().size(), 576U);
}

TEST(Engine, CountLimitCaps) {
  EXPECT_EQ(count_solutions(Puzzle::empty(GridSize::from_side(4)), 5).count, 5U);
  EXPECT_EQ(count_solutions(Puzzle::empty(GridSize::from_side(4)), 0).count, 0U);
}

TEST(Engine, NodeBudgetInterrupts) {
  const auto c = count_solutions(Puzzle::empty(GridSize::from_side(9)), 1000000, SearchBudget::nodes(50));
  EXPECT_TRUE(c.interrupted);
  const auto a = find_alternate(parse_grid(fixtures::kGrid), CluePattern::none(GridSize::from_side(9)),
                                SearchBudget::nodes(1));
  EXPECT_TRUE(a.interrupted() || a.found());
}

TEST(Engine, AlternateUnderGreenRemoval) {
  const Grid g = parse_grid(fixtures::kGrid);
  const CluePattern keep(g.size(), fixtures::green().complement());
  const auto alt = find_alternate(g, keep);
  ASSERT_TRUE(alt.found());
  for (std::size_t i = 0; i < 81; ++i) {
    if (fixtures::green().contains(i))
      EXPECT_EQ(alt.value->at(i), g.at(i) == 3 ? 8 : 3);
    else
      EXPECT_EQ(alt.value->at(i), g.at(i));
  }
  EXPECT_TRUE(find_alternate(g, CluePattern::of_puzzle(parse_puzzle(fixtures::kPuzzle17))).exhausted());
}

TEST(Engine, AlternateMatchesOracleOnFourByFour) {
  const auto& all = sudoku4();
  for (std::size_t gi = 0; gi < all.size(); gi += 37) {
    const Grid g = grid4(all[gi]);
    for (std::uint32_t m = 0; m < (1U << 16); m += 97) {
      IndexSet mask(16);
      for (int i = 0; i < 16; ++i)
        if (m >> i & 1U) mask.insert(static_cast<std::size_t>(i));
      const auto alt = find_alternate(g, CluePattern(g.size(), mask));
      EXPECT_EQ(alt.exhausted(), oracle::unique_under(all[gi], m, all)) << gi << " " << m;
      if (alt.value) {
        EXPECT_NE(*alt.value, g);
        for (int i = 0; i < 16; ++i)
          if (m >> i & 1U) EXPECT_EQ(alt.value->at(static_cast<std::size_t>(i)), g.at(static_cast<std::size_t>(i)));
      }
    }
  }
}

TEST(Deviation, ExactCountsMatchOracle) {
  const auto& all = sudoku4();
  for (std::size_t gi : {0U, 100U, 287U}) {
    const Grid g = grid4(all[gi]);
    for (int m = 1; m <= 16; ++m) {
      std::size_t expected = 0;
      for (const auto& h : all) expected += std::popcount(oracle::diff_mask(all[gi], h)) == m;
      DeviationEnumerator e(g, m);
      BudgetTracker t;
      std::size_t got = 0;
      EXPECT_EQ(e.enumerate(
                    [&](const Grid& h) {
                      int d = 0;
                      for (std::size_t i = 0; i < 16; ++i) d += h.at(i) != g.at(i);
                      EXPECT_EQ(d, m);
                      ++got;
                      return true;
                    },
                    t),
                SearchStatus::Exhausted);
      EXPECT_EQ(got, expected) << "grid " << gi << " m " << m;
    }
  }
}

TEST(Deviation, NogoodsExcludeSupersets) {
  const auto& all = sudoku4();
  const Grid g = grid4(all[5]);
  const auto minimal = oracle::minimal_unavoidable(all[5], all);
  ASSERT_GE(minimal.size(), 2U);
  std::vector<IndexSet> nogoods;
  for (std::size_t k = 0; k < 2; ++k) {
    IndexSet s(16);
    for (int i = 0; i < 16; ++i)
      if (minimal[k] >> i & 1U) s.insert(static_cast<std::size_t>(i));
    nogoods.push_back(s);
  }
  for (int m = 1; m <= 16; ++m) {
    std::size_t expected = 0;
    for (const auto& h : all) {
      const auto d = oracle::diff_mask(all[5], h);
      if (std::popcount(d) == m && (d & minimal[0]) != minimal[0] && (d & minimal[1]) != minimal[1]) ++expected;
    }
    DeviationEnumerator e(g, m, nogoods);
    BudgetTracker t;
    std::size_t got = 0;
    e.enumerate([&](const Grid&) { return ++got, true; }, t);
    EXPECT_EQ(got, expected) << m;
  }
}

TEST(Deviation, NoSingleDeviation) {
  const Grid g = parse_grid(fixtures::kGrid);
  EXPECT_TRUE(find_deviating_grid({g, 1, {}}).exhausted());
  EXPECT_TRUE(find_deviating_grid({g, 2, {}}).exhausted());
  EXPECT_TRUE(find_deviating_grid({g, 3, {}}).exhausted());
  const auto four = find_deviating_grid({g, 4, {}});
  ASSERT_TRUE(four.found());
  int d = 0;
  for (std::size_t i = 0; i < 81; ++i) d += four.value->at(i) != g.at(i);
  EXPECT_EQ(d, 4);
}

TEST(Deviation, LiveNogoodsMatchRestarts) {
  const Grid g = parse_grid(fixtures::kGrid);
  for (int m = 4; m <= 6; ++m) {
    std::vector<IndexSet> live;
    DeviationEnumerator e(g, m);
    BudgetTracker t;
    e.enumerate(
        [&](const Grid& h) {
          IndexSet d(81);
          for (std::size_t i = 0; i < 81; ++i)
            if (h.at(i) != g.at(i)) d.insert(i);
          live.push_back(d);
          e.add_nogood(d);
          return true;
        },
        t);
    std::vector<IndexSet> restart;
    while (true) {
      const auto out = find_deviating_grid({g, m, restart});
      if (!out.found()) break;
      IndexSet d(81);
      for (std::size_t i = 0; i < 81; ++i)
        if (out.value->at(i) != g.at(i)) d.insert(i);
      restart.push_back(d);
    }
    EXPECT_EQ(live, restart) << "m=" << m;
  }
}

TEST(Deviation, RejectsBadArguments) {
  const Grid g = parse_grid(fixtures::kGrid);
  EXPECT_THROW(find_deviating_grid({g, 0, {}}), Error);
  EXPECT_THROW(find_deviating_grid({g, 4, {IndexSet(16)}}), Error);
}
