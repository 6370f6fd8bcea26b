#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <sstream>

#include "fixtures.hpp"
#include "mscp/error.hpp"
#include "mscp/unavoidable.hpp"
#include "oracle.hpp"

using namespace mscp;

namespace {

Grid figure() { return parse_grid(fixtures::kGrid); }

IndexSet from_mask(std::uint32_t m) {
  IndexSet s(16);
  for (int i = 0; i < 16; ++i)
    if (m >> i & 1U) s.insert(static_cast<std::size_t>(i));
  return s;
}

std::uint32_t to_mask(const IndexSet& s) {
  std::uint32_t m = 0;
  s.for_each([&](std::size_t i) { m |= 1U << i; });
  return m;
}

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

TEST(Diff, IdenticalGridsRejected) {
  EXPECT_EQ(code_of([] { diff_cells(figure(), figure()); }), ErrorCode::IdenticalGrids);
}

TEST(Unavoidable, ColouredSetsAreMinimal) {
  const Grid g = figure();
  for (const auto& s : {fixtures::green(), fixtures::blue(), fixtures::red()}) {
    EXPECT_TRUE(is_unavoidable(g, s));
    EXPECT_TRUE(is_minimal_unavoidable(g, s));
  }
  IndexSet three = fixtures::green();
  three.erase(Cell{2, 8}.index(9));
  EXPECT_FALSE(is_unavoidable(g, three));
  EXPECT_FALSE(is_minimal_unavoidable(g, fixtures::green() | fixtures::blue()));
}

TEST(Unavoidable, GreenCellsAreTheSwappedThreesAndEights) {
  const Grid g = figure();
  for (const auto& c : cells_of(fixtures::green(), 9)) EXPECT_TRUE(g.at(c) == 3 || g.at(c) == 8);
}

TEST(Minimalize, KeepsMinimalSets) {
  const Grid g = figure();
  EXPECT_EQ(minimalize(g, fixtures::red()).cells(), fixtures::red());
  EXPECT_EQ(minimalize(g, fixtures::green()).cells(), fixtures::green());
}

TEST(Minimalize, UnionShrinksToAMember) {
  const Grid g = figure();
  const auto u = minimalize(g, fixtures::green() | fixtures::blue());
  EXPECT_TRUE(is_minimal_unavoidable(g, u.cells()));
  EXPECT_TRUE(u.cells().is_subset_of(fixtures::green() | fixtures::blue()));
  EXPECT_EQ(u.cells(), fixtures::blue());
}

TEST(Minimalize, RejectsAvoidableSets) {
  IndexSet s(81);
  s.insert(0);
  EXPECT_EQ(code_of([&] { minimalize(figure(), s); }), ErrorCode::NotUnavoidable);
}

TEST(Generate, FourByFourMatchesOracle) {
  const auto all = oracle::all_sudoku4();
  for (std::size_t gi = 0; gi < all.size(); gi += 23) {
    const Grid g(GridSize::from_side(4), std::vector<std::uint8_t>(all[gi].begin(), all[gi].end()));
    const auto coll = generate_all(g);
    std::vector<std::uint32_t> got;
    for (const auto& s : coll.sets()) got.push_back(to_mask(s.cells()));
    auto expected = oracle::minimal_unavoidable(all[gi], all);
    auto sorted_got = got;
    std::sort(sorted_got.begin(), sorted_got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(sorted_got, expected) << gi;
    EXPECT_EQ(coll.complete_through(), 16);
    EXPECT_FALSE(coll.interrupted());
    for (std::size_t i = 1; i < got.size(); ++i) EXPECT_LE(std::popcount(got[i - 1]), std::popcount(got[i]));
  }
}

TEST(Generate, FigureSetsUpToEight) {
  GenerationLimits lim;
  lim.max_size = 8;
  const auto coll = generate_all(figure(), lim);
  const auto has = [&](const IndexSet& s) {
    return std::any_of(coll.sets().begin(), coll.sets().end(), [&](const auto& u) { return u.cells() == s; });
  };
  EXPECT_TRUE(has(fixtures::green()));
  EXPECT_TRUE(has(fixtures::blue()));
  EXPECT_TRUE(has(fixtures::red()));
  for (const auto& s : coll.sets()) {
    EXPECT_NE(s.size(), 1U);
    EXPECT_NE(s.size(), 2U);
    EXPECT_NE(s.size(), 3U);
    EXPECT_NE(s.size(), 5U);
    EXPECT_NE(s.size(), 7U);
    EXPECT_LE(s.size(), 8U);
  }
  EXPECT_EQ(coll.complete_through(), 8);
}

TEST(Generate, LimitsAndProgress) {
  GenerationLimits lim;
  lim.max_sets = 7;
  std::vector<ProgressRow> rows;
  const auto coll = generate_all(figure(), lim, [&](const ProgressRow& r) { rows.push_back(r); });
  EXPECT_EQ(coll.size(), 7U);
  ASSERT_EQ(rows.size(), 7U);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].set_index, i + 1);
    if (i) EXPECT_GE(rows[i].elapsed_seconds, rows[i - 1].elapsed_seconds);
  }
  EXPECT_FALSE(coll.interrupted());
  EXPECT_THROW(generate_all(figure(), GenerationLimits{0, {}, {}}), Error);

  GenerationLimits fast;
  fast.max_sets = 100000;
  fast.max_time = std::chrono::duration<double>(1e-9);
  EXPECT_TRUE(generate_all(figure(), fast).interrupted());
}

TEST(Collection, AntichainEnforced) {
  const Grid g = figure();
  UnavoidableCollection c(g);
  c.insert(UnavoidableSet(g.size(), fixtures::green()));
  EXPECT_EQ(code_of([&] { c.insert(UnavoidableSet(g.size(), fixtures::green() | fixtures::blue())); }),
            ErrorCode::CorruptFile);
  EXPECT_FALSE(c.admits(UnavoidableSet(g.size(), fixtures::green())));
  EXPECT_TRUE(c.admits(UnavoidableSet(g.size(), fixtures::blue())));
}

TEST(Collection, FileRoundTrip) {
  const Grid g = figure();
  GenerationLimits lim;
  lim.max_size = 6;
  const auto coll = generate_all(g, lim);
  std::stringstream io;
  write_collection(coll, io);
  const auto back = read_collection(io, g);
  EXPECT_EQ(back, coll);
  EXPECT_EQ(back.complete_through(), 6);
}

TEST(Collection, MinimalFileAndErrors) {
  const Grid g = figure();
  const std::string head = "MSCPUNAV v1 n=9 fingerprint=" + fingerprint_hex(fingerprint(g)) + "\n";
  {
    std::istringstream in(head + "m=4: 1,3 1,8 2,3 2,8\n");
    const auto c = read_collection(in, g);
    ASSERT_EQ(c.size(), 1U);
    EXPECT_EQ(c[0].cells(), fixtures::green());
    EXPECT_EQ(c.metadata()[0].generation_index, 1U);
  }
  const auto fails = [&](const std::string& body) {
    std::istringstream in(head + body);
    return code_of([&] { read_collection(in, g); });
  };
  EXPECT_EQ(fails("m=3: 1,3 1,8 2,3 2,8\n"), ErrorCode::CorruptFile);
  EXPECT_EQ(fails("m=4: 1,3 1,8 2,3 2,10\n"), ErrorCode::CorruptFile);
  EXPECT_EQ(fails("m=4: 1,3 1,8 2,3 2,8\nm=4: 1,3 1,8 2,3 2,8\n"), ErrorCode::CorruptFile);
  EXPECT_EQ(fails("1,3 1,8\n"), ErrorCode::CorruptFile);

  std::istringstream other("MSCPUNAV v1 n=9 fingerprint=0000000000000001\n");
  EXPECT_EQ(code_of([&] { read_collection(other, g); }), ErrorCode::FingerprintMismatch);
}

TEST(Collection, PrefixLowersCompleteness) {
  GenerationLimits lim;
  lim.max_size = 8;
  const auto coll = generate_all(figure(), lim);
  const auto p = coll.prefix(3);
  EXPECT_EQ(p.size(), 3U);
  EXPECT_EQ(p.complete_through(), 3);
  EXPECT_EQ(coll.prefix(coll.size()).complete_through(), 8);
}
