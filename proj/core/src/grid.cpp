#include "mscp/grid.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "mscp/error.hpp"

namespace mscp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IdenticalGrids: return "IdenticalGrids";
    case ErrorCode::NotUnavoidable: return "NotUnavoidable";
    case ErrorCode::Interrupted: return "Interrupted";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

GridSize GridSize::from_side(int n) {
  int s = 1;
  while (s * s < n) ++s;
  if (n < 4 || n > kMaxSide || s * s != n)
    throw Error(ErrorCode::InvalidArgument,
                "grid side must be a perfect square in [4, 64], got " + std::to_string(n));
  return GridSize(n, s);
}

IndexSet cell_set(int n, std::initializer_list<Cell> cells) {
  IndexSet s(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& c : cells) s.insert(c.index(n));
  return s;
}

std::vector<Cell> cells_of(const IndexSet& set, int n) {
  std::vector<Cell> out;
  set.for_each([&](std::size_t i) { out.push_back(Cell::from_index(i, n)); });
  return out;
}

void check_units(GridSize size, const std::vector<std::uint8_t>& entries) {
  const int n = size.side();
  const int s = size.box();
  if (entries.size() != size.cells())
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(size.cells()) + " entries");
  auto scan = [&](const char* unit, int u, auto cell_of) {
    std::uint64_t seen = 0;
    for (int k = 0; k < n; ++k) {
      const int d = entries[cell_of(k)];
      if (d == 0) continue;
      if (d < 0 || d > n)
        throw Error(ErrorCode::IllegalCharacter, "digit " + std::to_string(d) + " out of range");
      const std::uint64_t bit = std::uint64_t{1} << (d - 1);
      if (seen & bit)
        throw Error(ErrorCode::ConstraintViolation, std::string(unit) + " " + std::to_string(u + 1) +
                                                        " repeats digit " + std::to_string(d));
      seen |= bit;
    }
  };
  for (int r = 0; r < n; ++r) scan("row", r, [&](int k) { return r * n + k; });
  for (int c = 0; c < n; ++c) scan("col", c, [&](int k) { return k * n + c; });
  for (int b = 0; b < n; ++b) {
    const int r0 = (b / s) * s;
    const int c0 = (b % s) * s;
    scan("box", b, [&](int k) { return (r0 + k / s) * n + c0 + k % s; });
  }
}

Grid::Grid(GridSize size, std::vector<std::uint8_t> entries)
    : size_(size), entries_(std::move(entries)) {
  check_units(size_, entries_);
  for (auto d : entries_)
    if (d == 0) throw Error(ErrorCode::IllegalCharacter, "grid has an empty cell");
}

Puzzle::Puzzle(GridSize size, std::vector<std::uint8_t> entries)
    : size_(size), entries_(std::move(entries)) {
  check_units(size_, entries_);
}

Puzzle Puzzle::empty(GridSize size) { return {size, std::vector<std::uint8_t>(size.cells(), 0)}; }

Puzzle Puzzle::from_grid(const Grid& grid) { return {grid.size(), grid.entries()}; }

std::size_t Puzzle::givens() const {
  std::size_t g = 0;
  for (auto d : entries_) g += d != 0;
  return g;
}

CluePattern::CluePattern(GridSize size, IndexSet mask) : size_(size), mask_(std::move(mask)) {
  if (mask_.universe() != size_.cells())
    throw Error(ErrorCode::SizeMismatch, "clue mask universe does not match grid size");
}

CluePattern CluePattern::of_puzzle(const Puzzle& puzzle) {
  CluePattern p(puzzle.size());
  for (std::size_t i = 0; i < puzzle.size().cells(); ++i)
    if (puzzle.at(i) != 0) p.mask_.insert(i);
  return p;
}

void CluePattern::set(Cell c, bool on) {
  const auto i = c.index(size_.side());
  if (on)
    mask_.insert(i);
  else
    mask_.erase(i);
}

namespace {

GridSize size_from_count(std::size_t count) {
  std::size_t n = 1;
  while (n * n < count) ++n;
  if (n * n != count)
    throw Error(ErrorCode::LengthMismatch, std::to_string(count) + " cells is not an n*n grid");
  return GridSize::from_side(static_cast<int>(n));
}

std::vector<std::uint8_t> parse_entries(std::string_view text, GridSize size, bool allow_empty) {
  const int n = size.side();
  std::vector<std::uint8_t> out;
  out.reserve(size.cells());
  auto illegal = [](std::string_view tok) {
    return Error(ErrorCode::IllegalCharacter, "illegal cell '" + std::string(tok) + "'");
  };
  auto push_token = [&](std::string_view tok) {
    if (tok == "." || tok == "0") {
      if (!allow_empty) throw illegal(tok);
      out.push_back(0);
      return;
    }
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || v < 1 || v > n) throw illegal(tok);
    out.push_back(static_cast<std::uint8_t>(v));
  };
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      auto pos = text.find(',', start);
      push_token(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    if (n > 9)
      throw Error(ErrorCode::IllegalCharacter, "grids with n > 9 need the comma-separated format");
    for (std::size_t i = 0; i < text.size(); ++i) push_token(text.substr(i, 1));
  }
  if (out.size() != size.cells())
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(size.cells()) +
                                               " cells, got " + std::to_string(out.size()));
  return out;
}

std::size_t field_count(std::string_view text) {
  if (text.find(',') == std::string_view::npos) return text.size();
  std::size_t c = 1;
  for (char ch : text) c += ch == ',';
  return c;
}

std::string serialize_entries(GridSize size, const std::vector<std::uint8_t>& entries) {
  std::string out;
  if (size.side() <= 9) {
    out.reserve(entries.size());
    for (auto d : entries) out.push_back(d == 0 ? '.' : static_cast<char>('0' + d));
    return out;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out.push_back(',');
    if (entries[i] == 0)
      out.push_back('.');
    else
      out += std::to_string(entries[i]);
  }
  return out;
}

}  // namespace

GridSize infer_size(std::string_view text) { return size_from_count(field_count(text)); }

Grid parse_grid(std::string_view text, GridSize size) {
  return {size, parse_entries(text, size, false)};
}
Grid parse_grid(std::string_view text) { return parse_grid(text, infer_size(text)); }

Puzzle parse_puzzle(std::string_view text, GridSize size) {
  return {size, parse_entries(text, size, true)};
}
Puzzle parse_puzzle(std::string_view text) { return parse_puzzle(text, infer_size(text)); }

std::string serialize(const Grid& grid) { return serialize_entries(grid.size(), grid.entries()); }
std::string serialize(const Puzzle& puzzle) {
  return serialize_entries(puzzle.size(), puzzle.entries());
}

Puzzle apply_pattern(const Grid& grid, const CluePattern& pattern) {
  if (!(grid.size() == pattern.size()))
    throw Error(ErrorCode::SizeMismatch, "pattern and grid sizes differ");
  std::vector<std::uint8_t> e(grid.size().cells(), 0);
  pattern.mask().for_each([&](std::size_t i) { e[i] = static_cast<std::uint8_t>(grid.at(i)); });
  return {grid.size(), std::move(e)};
}

std::vector<GridRecord> read_records(std::istream& in) {
  std::vector<GridRecord> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_first_of(" \t\r", b);
    GridRecord r;
    r.line = no;
    r.text = line.substr(b, e == std::string::npos ? std::string::npos : e - b);
    if (e != std::string::npos) {
      const auto cb = line.find_first_not_of(" \t\r", e);
      if (cb != std::string::npos) {
        const auto ce = line.find_last_not_of(" \t\r");
        r.comment = line.substr(cb, ce - cb + 1);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GridRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_records(in);
}

std::uint64_t fingerprint(const Grid& grid) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : serialize(grid)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace mscp
