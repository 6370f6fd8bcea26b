#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "mscp/engine.hpp"
#include "mscp/error.hpp"
#include "mscp/model_export.hpp"
#include "oracle.hpp"

using namespace mscp;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("mscp_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

bool follower_row(const std::string& name) {
  return name.starts_with("G") || name.starts_with("F1_") || name == "N1";
}

}  // namespace

TEST(Names, PaddedAndParsed) {
  EXPECT_EQ(x_name(9, 1, 2, 3), "x_1_2_3");
  EXPECT_EQ(x_name(16, 1, 12, 3), "x_01_12_03");
  EXPECT_EQ(y_name(16, 10, 2), "y_10_02");
  for (int i = 1; i <= 16; ++i)
    for (int k = 1; k <= 16; ++k) {
      EXPECT_EQ(parse_variable(x_name(16, i, 5, k)), (VarRef{VarRef::Kind::X, i, 5, k}));
      EXPECT_EQ(parse_variable(y_name(16, i, k)), (VarRef{VarRef::Kind::Y, i, k, 0}));
    }
  EXPECT_EQ(parse_variable("z")->kind, VarRef::Kind::Z);
  EXPECT_FALSE(parse_variable("x_1_2"));
  EXPECT_FALSE(parse_variable("w_1_1"));
  EXPECT_FALSE(parse_variable("y_0_1"));
}

TEST(Model, Counts) {
  const auto nine = bilevel_system(parse_grid(fixtures::kGrid));
  EXPECT_EQ(nine.variable_count(), 811U);
  EXPECT_EQ(nine.row_count(), 407U);
  const auto four = bilevel_system(parse_grid(fixtures::kGrid4));
  EXPECT_EQ(four.variable_count(), 81U);
  EXPECT_EQ(four.row_count(), 82U);
}

TEST(Model, GreenCutRow) {
  const Grid g = parse_grid(fixtures::kGrid);
  UnavoidableCollection c(g);
  c.insert(UnavoidableSet(g.size(), fixtures::green()));
  const auto sys = bilevel_system(g, &c);
  ASSERT_EQ(sys.row_count(), 408U);
  const Row& u = sys.rows.back();
  EXPECT_EQ(u.name, "U_1");
  EXPECT_EQ(u.sense, Sense::GreaterEqual);
  EXPECT_EQ(u.rhs, 1);
  EXPECT_EQ(u.terms, (std::vector<Term>{{1, "y_1_3"}, {1, "y_1_8"}, {1, "y_2_3"}, {1, "y_2_8"}}));
}

TEST(Model, FollowerRowsAsWritten) {
  const Grid g = parse_grid(fixtures::kGrid);
  const auto sys = bilevel_system(g);
  const auto find = [&](const std::string& n) -> const Row& {
    for (const auto& r : sys.rows)
      if (r.name == n) return r;
    throw std::runtime_error(n);
  };
  EXPECT_EQ(find("F1_1_1").terms, (std::vector<Term>{{1, "x_1_1_7"}, {-1, "y_1_1"}}));
  EXPECT_EQ(find("N1").rhs, 80);
  EXPECT_EQ(find("N1").terms.back(), (Term{-1, "z"}));
  EXPECT_EQ(find("V1").sense, Sense::Equal);
  EXPECT_EQ(find("G3_2_3_5").terms.size(), 9U);
  EXPECT_EQ(find("G3_2_3_5").terms.front().var, "x_4_7_5");
}

TEST(Model, LpRoundTrip) {
  const Grid g = parse_grid(fixtures::kGrid);
  GenerationLimits lim;
  lim.max_size = 8;
  const auto cuts = generate_all(g, lim);
  const auto sys = bilevel_system(g, &cuts);
  std::stringstream io;
  write_lp(sys, io);
  for (std::string line; std::getline(io, line);) EXPECT_LE(line.size(), 80U);
  io.clear();
  io.seekg(0);
  EXPECT_EQ(read_lp(io), sys);
}

TEST(Model, LpReaderRejectsJunk) {
  std::istringstream a("Minimize\n obj: y_1_1\nSubject To\n R1: x_1_1_1 +\n");
  EXPECT_THROW(read_lp(a), Error);
  std::istringstream b("Subject To\n R1: x >= 1\nEnd\n");
  EXPECT_THROW(read_lp(b), Error);
  std::istringstream c("Minimize\n obj: y\nSubject To\n R1: x >= one\nEnd\n");
  EXPECT_THROW(read_lp(c), Error);
}

TEST(Model, AuxRoundTrip) {
  const auto sys = bilevel_system(parse_grid(fixtures::kGrid));
  const auto aux = follower_annotation(sys);
  EXPECT_EQ(aux.variables.size(), 730U);
  EXPECT_EQ(aux.rows.size(), 406U);
  EXPECT_EQ(aux.objective, (std::vector<Term>{{1, "z"}}));
  std::stringstream io;
  write_aux(aux, io);
  EXPECT_EQ(read_aux(io), aux);
  std::istringstream bad("N 2\nM 0\nLC z\n");
  EXPECT_THROW(read_aux(bad), Error);
}

TEST(Export, FilesAreWrittenAndChecked) {
  const Grid g = parse_grid(fixtures::kGrid);
  UnavoidableCollection c(g);
  c.insert(UnavoidableSet(g.size(), fixtures::green()));
  const auto dir = scratch("export");
  const auto files = export_bilevel(g, &c, dir);
  EXPECT_TRUE(std::filesystem::exists(files.model_path));
  EXPECT_TRUE(std::filesystem::exists(files.aux_path));
  ASSERT_TRUE(files.cuts_path);
  EXPECT_EQ(files.variables, 811U);
  EXPECT_EQ(files.rows, 408U);
  std::ifstream in(*files.cuts_path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, " U_1: y_1_3 + y_1_8 + y_2_3 + y_2_8 >= 1");
  EXPECT_FALSE(std::getline(in, line));
  EXPECT_FALSE(export_bilevel(g, nullptr, dir, "plain").cuts_path);
  std::filesystem::remove_all(dir);
}

TEST(Export, CutsFile) {
  const auto all = oracle::all_sudoku4();
  const Grid g(GridSize::from_side(4), std::vector<std::uint8_t>(all[9].begin(), all[9].end()));
  const auto coll = generate_all(g);
  const auto dir = scratch("cuts");
  std::filesystem::create_directories(dir);
  export_cuts(coll, dir / "c.cuts");
  std::ifstream in(dir / "c.cuts");
  EXPECT_EQ(read_cut_rows(in).size(), oracle::minimal_unavoidable(all[9], all).size());
  try {
    export_cuts(UnavoidableCollection(g), dir / "empty.cuts");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCollection);
  }
  std::filesystem::remove_all(dir);
}

TEST(Export, FollowerAgreesWithEngine) {
  const auto all = oracle::all_sudoku4();
  std::mt19937 rng(7);
  for (int t = 0; t < 40; ++t) {
    const auto& cells = all[rng() % all.size()];
    const Grid g(GridSize::from_side(4), std::vector<std::uint8_t>(cells.begin(), cells.end()));
    std::stringstream io;
    write_lp(bilevel_system(g), io);
    const auto sys = read_lp(io);
    IndexSet clues(16);
    std::map<std::string, int> fixed{{"z", 0}};
    const std::uint32_t mask = rng() & 0xFFFF;
    for (int i = 0; i < 16; ++i) {
      const bool on = mask >> i & 1U;
      if (on) clues.insert(static_cast<std::size_t>(i));
      fixed[y_name(4, i / 4 + 1, i % 4 + 1)] = on;
    }
    const bool engine = find_alternate(g, CluePattern(g.size(), clues)).found();
    EXPECT_EQ(oracle::zero_one_solve(sys, fixed, follower_row).has_value(), engine);
    EXPECT_EQ(follower_alternate(sys, clues).has_value(), engine);
  }
}
