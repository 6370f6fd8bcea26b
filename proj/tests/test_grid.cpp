#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mscp/error.hpp"
#include "mscp/grid.hpp"

using namespace mscp;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InternalConsistency;
}

}  // namespace

TEST(GridSize, AcceptsPerfectSquares) {
  EXPECT_EQ(GridSize::from_side(9).box(), 3);
  EXPECT_EQ(GridSize::from_side(16).cells(), 256U);
  EXPECT_EQ(code_of([] { GridSize::from_side(8); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GridSize::from_side(81); }), ErrorCode::InvalidArgument);
}

TEST(Parse, FigurePuzzleHasSeventeenGivens) {
  const Puzzle p = parse_puzzle(fixtures::kPuzzle17);
  EXPECT_EQ(p.side(), 9);
  EXPECT_EQ(p.givens(), 17U);
  EXPECT_EQ(p.at(Cell{1, 4}), 6);
  EXPECT_EQ(p.at(Cell{1, 1}), 0);
  EXPECT_EQ(serialize(p), fixtures::kPuzzle17);
}

TEST(Parse, ZeroMeansEmpty) {
  std::string s = fixtures::kPuzzle17;
  for (auto& c : s)
    if (c == '.') c = '0';
  EXPECT_EQ(parse_puzzle(s), parse_puzzle(fixtures::kPuzzle17));
}

TEST(Parse, GridRoundTrip) {
  const Grid g = parse_grid(fixtures::kGrid);
  EXPECT_EQ(serialize(g), fixtures::kGrid);
  EXPECT_EQ(g.at(Cell{9, 9}), 4);
}

TEST(Parse, Errors) {
  EXPECT_EQ(code_of([] { parse_grid(std::string(fixtures::kGrid).substr(1)); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { parse_puzzle(std::string(80, '.') + "x"); }), ErrorCode::IllegalCharacter);
  std::string dup = fixtures::kGrid;
  std::swap(dup[0], dup[9]);
  EXPECT_EQ(code_of([&] { parse_grid(dup); }), ErrorCode::ConstraintViolation);
  EXPECT_EQ(code_of([] { parse_grid(std::string(fixtures::kPuzzle17)); }), ErrorCode::IllegalCharacter);
  EXPECT_EQ(code_of([] { parse_puzzle("1...", GridSize::from_side(4)); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { parse_puzzle("5" + std::string(15, '.')); }), ErrorCode::IllegalCharacter);
  EXPECT_EQ(code_of([] { parse_puzzle("11" + std::string(14, '.')); }), ErrorCode::ConstraintViolation);
}

TEST(Parse, SixteenNeedsCommas) {
  std::string text;
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      if (!text.empty()) text += ',';
      text += r == 0 && c < 2 ? std::to_string(c + 10) : "0";
    }
  const Puzzle p = parse_puzzle(text);
  EXPECT_EQ(p.side(), 16);
  EXPECT_EQ(p.at(Cell{1, 2}), 11);
  EXPECT_EQ(p.givens(), 2U);
  EXPECT_EQ(parse_puzzle(serialize(p)), p);
}

TEST(Pattern, ApplyAndRecover) {
  const Grid g = parse_grid(fixtures::kGrid);
  const Puzzle p = parse_puzzle(fixtures::kPuzzle17);
  const CluePattern pat = CluePattern::of_puzzle(p);
  EXPECT_EQ(pat.cardinality(), 17U);
  EXPECT_EQ(apply_pattern(g, pat), p);
  EXPECT_EQ(apply_pattern(g, CluePattern::all(g.size())), Puzzle::from_grid(g));
  EXPECT_EQ(apply_pattern(g, CluePattern::none(g.size())).givens(), 0U);
}

TEST(Cells, IndexRoundTrip) {
  for (std::size_t i = 0; i < 81; ++i) EXPECT_EQ(Cell::from_index(i, 9).index(9), i);
  EXPECT_EQ((Cell{2, 3}.index(9)), 11U);
  const auto cells = cells_of(fixtures::green(), 9);
  ASSERT_EQ(cells.size(), 4U);
  EXPECT_EQ(cells[1], (Cell{1, 8}));
}

TEST(Records, SkipsBlankAndCommentLines) {
  std::istringstream in("# header\n\n" + std::string(fixtures::kGrid) + " fig 1b\n  \n" + fixtures::kPuzzle17 + "\n");
  const auto r = read_records(in);
  ASSERT_EQ(r.size(), 2U);
  EXPECT_EQ(r[0].line, 3U);
  EXPECT_EQ(r[0].text, fixtures::kGrid);
  EXPECT_EQ(r[0].comment, "fig 1b");
  EXPECT_EQ(r[1].line, 5U);
}

TEST(Fingerprint, StableAndDistinct) {
  const Grid g = parse_grid(fixtures::kGrid);
  EXPECT_EQ(fingerprint(g), fingerprint(parse_grid(fixtures::kGrid)));
  std::string t = fixtures::kGrid;
  for (auto& c : t) c = c == '3' ? '8' : c == '8' ? '3' : c;
  EXPECT_NE(fingerprint(g), fingerprint(parse_grid(t)));
}
