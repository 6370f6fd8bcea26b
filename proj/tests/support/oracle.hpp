#pragma once

// Brute-force references for 4x4 instances. Nothing here calls the library's
// search code.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mscp/model_export.hpp"

namespace oracle {

using Grid4 = std::array<std::uint8_t, 16>;

// Plain backtracking over cells in row-major order.
std::vector<Grid4> all_sudoku4();
std::vector<Grid4> all_latin4();

std::uint32_t diff_mask(const Grid4& a, const Grid4& b);

// Inclusion-minimal difference masks against every other grid in `all`,
// sorted by (size, mask).
std::vector<std::uint32_t> minimal_unavoidable(const Grid4& g, const std::vector<Grid4>& all);

// No other grid of `all` agrees with g on `mask`.
bool unique_under(const Grid4& g, std::uint32_t mask, const std::vector<Grid4>& all);

// Smallest mask size with a unique completion, trying sizes in order.
int min_clues(const Grid4& g, const std::vector<Grid4>& all);

// Smallest hitting set of `family` over `universe` <= 24 cells, by subsets
// in increasing size.
int min_hitting_size(int universe, const std::vector<std::uint32_t>& family);

// Generic 0-1 feasibility of all rows of `sys` whose names pass `keep`, with
// the variables in `fixed` pinned. Returns a satisfying assignment.
std::optional<std::map<std::string, int>> zero_one_solve(const mscp::ConstraintSystem& sys,
                                                         const std::map<std::string, int>& fixed,
                                                         bool (*keep)(const std::string& row_name));

std::string to_text(const Grid4& g);

}  // namespace oracle
