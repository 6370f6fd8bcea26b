#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mscp/solver.hpp"

namespace mscp {

// n x n array with every symbol 1..n once per row and column.
class LatinSquare {
 public:
  // Throws Error(ConstraintViolation) on a repeated symbol.
  LatinSquare(int n, std::vector<std::uint8_t> entries);

  int side() const { return n_; }
  int at(int row, int col) const { return entries_[static_cast<std::size_t>((row - 1) * n_ + col - 1)]; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }

  friend bool operator==(const LatinSquare&, const LatinSquare&) = default;

 private:
  int n_;
  std::vector<std::uint8_t> entries_;
};

// n*n digits (n <= 9), row-major.
LatinSquare parse_latin(std::string_view text);
std::string serialize(const LatinSquare& square);

// Latin-square completion as an FCP: one index per cell.
FcpInstance latin_fcp(const LatinSquare& square);

}  // namespace mscp
