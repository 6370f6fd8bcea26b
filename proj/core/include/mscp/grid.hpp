#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mscp/index_set.hpp"

namespace mscp {

// Side length n = s*s of a Sudoku grid, with s the box side.
class GridSize {
 public:
  static constexpr int kMaxSide = 64;

  // Throws Error(InvalidArgument) unless n is a perfect square in [4, 64].
  static GridSize from_side(int n);

  int side() const { return n_; }
  int box() const { return s_; }
  std::size_t cells() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  friend bool operator==(const GridSize&, const GridSize&) = default;

 private:
  GridSize(int n, int s) : n_(n), s_(s) {}
  int n_ = 9;
  int s_ = 3;
};

// 1-based (row, col); ordered lexicographically.
struct Cell {
  int row = 1;
  int col = 1;

  std::size_t index(int n) const {
    return static_cast<std::size_t>(row - 1) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(col - 1);
  }
  static Cell from_index(std::size_t index, int n) {
    return {static_cast<int>(index / static_cast<std::size_t>(n)) + 1,
            static_cast<int>(index % static_cast<std::size_t>(n)) + 1};
  }

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Builds a cell-index set from 1-based cells.
IndexSet cell_set(int n, std::initializer_list<Cell> cells);
std::vector<Cell> cells_of(const IndexSet& set, int n);

// A completed grid. Every row, column and box holds each digit once.
class Grid {
 public:
  // Validates all unit constraints; throws Error(ConstraintViolation).
  Grid(GridSize size, std::vector<std::uint8_t> entries);

  GridSize size() const { return size_; }
  int side() const { return size_.side(); }
  int at(Cell c) const { return entries_[c.index(size_.side())]; }
  int at(std::size_t index) const { return entries_[index]; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  GridSize size_;
  std::vector<std::uint8_t> entries_;
};

// Partially filled grid, 0 marks an empty cell. Givens never conflict.
class Puzzle {
 public:
  Puzzle(GridSize size, std::vector<std::uint8_t> entries);
  static Puzzle empty(GridSize size);
  static Puzzle from_grid(const Grid& grid);

  GridSize size() const { return size_; }
  int side() const { return size_.side(); }
  int at(Cell c) const { return entries_[c.index(size_.side())]; }
  int at(std::size_t index) const { return entries_[index]; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }
  std::size_t givens() const;

  friend bool operator==(const Puzzle&, const Puzzle&) = default;

 private:
  GridSize size_;
  std::vector<std::uint8_t> entries_;
};

// Leader decision: which cells are revealed as clues.
class CluePattern {
 public:
  explicit CluePattern(GridSize size) : size_(size), mask_(size.cells()) {}
  CluePattern(GridSize size, IndexSet mask);
  static CluePattern all(GridSize size) { return {size, IndexSet::full(size.cells())}; }
  static CluePattern none(GridSize size) { return CluePattern(size); }
  // Cells given in the puzzle.
  static CluePattern of_puzzle(const Puzzle& puzzle);

  GridSize size() const { return size_; }
  bool at(Cell c) const { return mask_.contains(c.index(size_.side())); }
  void set(Cell c, bool on);
  std::size_t cardinality() const { return mask_.count(); }
  const IndexSet& mask() const { return mask_; }

  friend bool operator==(const CluePattern&, const CluePattern&) = default;

 private:
  GridSize size_;
  IndexSet mask_;
};

// Checks the unit constraints on a (possibly partial) assignment; throws
// Error(ConstraintViolation) naming the first repeated digit found, scanning
// rows, then columns, then boxes.
void check_units(GridSize size, const std::vector<std::uint8_t>& entries);

// Infers n from the text shape: n*n characters, or n*n comma-separated fields.
GridSize infer_size(std::string_view text);

Grid parse_grid(std::string_view text, GridSize size);
Grid parse_grid(std::string_view text);
Puzzle parse_puzzle(std::string_view text, GridSize size);
Puzzle parse_puzzle(std::string_view text);

// Single characters for n <= 9, comma-separated fields above; '.' for empty.
std::string serialize(const Grid& grid);
std::string serialize(const Puzzle& puzzle);

Puzzle apply_pattern(const Grid& grid, const CluePattern& pattern);

// One record per non-blank, non-'#' line: the first whitespace-delimited
// token is the instance, anything after it is a comment.
struct GridRecord {
  std::size_t line = 0;
  std::string text;
  std::string comment;
};
std::vector<GridRecord> read_records(std::istream& in);
std::vector<GridRecord> read_records_file(const std::string& path);

// Stable 64-bit FNV-1a of serialize(grid).
std::uint64_t fingerprint(const Grid& grid);

}  // namespace mscp
