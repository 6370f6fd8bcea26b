#include "mscp/unavoidable.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mscp/engine.hpp"
#include "mscp/error.hpp"

namespace mscp {

UnavoidableSet::UnavoidableSet(GridSize size, IndexSet cells) : size_(size), cells_(std::move(cells)) {
  if (cells_.universe() != size_.cells())
    throw Error(ErrorCode::SizeMismatch, "cell set universe does not match grid size");
}

std::string UnavoidableSet::to_string() const {
  std::string out;
  for (const auto& c : sorted_cells()) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(c.row) + "," + std::to_string(c.col);
  }
  return out;
}

UnavoidableCollection::UnavoidableCollection(const Grid& grid)
    : size_(grid.size()), fingerprint_(mscp::fingerprint(grid)) {}

UnavoidableCollection::UnavoidableCollection(GridSize size, std::uint64_t fingerprint)
    : size_(size), fingerprint_(fingerprint) {}

bool UnavoidableCollection::admits(const UnavoidableSet& set) const {
  if (!(set.grid_size() == size_)) return false;
  for (const auto& s : sets_)
    if (s.cells().is_subset_of(set.cells()) || set.cells().is_subset_of(s.cells())) return false;
  return true;
}

void UnavoidableCollection::insert(UnavoidableSet set, SetMetadata meta) {
  if (!(set.grid_size() == size_)) throw Error(ErrorCode::SizeMismatch, "set belongs to another grid size");
  if (!admits(set))
    throw Error(ErrorCode::CorruptFile,
                "antichain violated by {" + set.to_string() + "}");
  sets_.push_back(std::move(set));
  meta_.push_back(meta);
}

std::vector<IndexSet> UnavoidableCollection::families() const {
  std::vector<IndexSet> out;
  out.reserve(sets_.size());
  for (const auto& s : sets_) out.push_back(s.cells());
  return out;
}

UnavoidableCollection UnavoidableCollection::prefix(std::size_t count) const {
  UnavoidableCollection out(size_, fingerprint_);
  count = std::min(count, sets_.size());
  out.sets_.assign(sets_.begin(), sets_.begin() + static_cast<std::ptrdiff_t>(count));
  out.meta_.assign(meta_.begin(), meta_.begin() + static_cast<std::ptrdiff_t>(count));
  // Sets arrive in nondecreasing size, so completeness survives up to the
  // size of the first dropped set minus one.
  out.complete_through_ = complete_through_;
  if (count < sets_.size())
    out.complete_through_ =
        std::min(complete_through_, static_cast<int>(sets_[count].size()) - 1);
  out.interrupted_ = interrupted_;
  return out;
}

UnavoidableSet diff_cells(const Grid& g, const Grid& g2) {
  if (!(g.size() == g2.size())) throw Error(ErrorCode::SizeMismatch, "grid sizes differ");
  IndexSet d(g.size().cells());
  for (std::size_t i = 0; i < g.size().cells(); ++i)
    if (g.at(i) != g2.at(i)) d.insert(i);
  if (d.empty()) throw Error(ErrorCode::IdenticalGrids, "grids are identical");
  return {g.size(), std::move(d)};
}

namespace {

// Alternate grid agreeing with g outside `cells`, if any.
std::optional<Grid> alternate_within(const Grid& g, const IndexSet& cells, const SearchBudget& budget) {
  if (cells.universe() != g.size().cells())
    throw Error(ErrorCode::SizeMismatch, "cell set universe does not match grid size");
  auto out = find_alternate(g, CluePattern(g.size(), cells.complement()), budget);
  if (out.interrupted()) throw Error(ErrorCode::Interrupted, "alternate search budget exhausted");
  return out.value;
}

}  // namespace

bool is_unavoidable(const Grid& g, const IndexSet& cells, const SearchBudget& budget) {
  return alternate_within(g, cells, budget).has_value();
}

UnavoidableSet minimalize(const Grid& g, const IndexSet& cells, const SearchBudget& budget) {
  auto first = alternate_within(g, cells, budget);
  if (!first) throw Error(ErrorCode::NotUnavoidable, "cell set is not unavoidable");
  IndexSet current = diff_cells(g, *first).cells();
  for (std::size_t c = 0; c < current.universe(); ++c) {
    if (!current.contains(c)) continue;
    IndexSet trial = current;
    trial.erase(c);
    if (auto alt = alternate_within(g, trial, budget)) current = diff_cells(g, *alt).cells();
  }
  return {g.size(), std::move(current)};
}

bool is_minimal_unavoidable(const Grid& g, const IndexSet& cells) {
  if (!is_unavoidable(g, cells)) return false;
  bool minimal = true;
  cells.for_each([&](std::size_t c) {
    if (!minimal) return;
    IndexSet trial = cells;
    trial.erase(c);
    if (is_unavoidable(g, trial)) minimal = false;
  });
  return minimal;
}

UnavoidableCollection generate_all(const Grid& g, const GenerationLimits& limits,
                                   const ProgressSink& progress) {
  if (limits.max_sets < 1) throw Error(ErrorCode::InvalidArgument, "max_sets must be >= 1");
  UnavoidableCollection coll(g);
  BudgetTracker tracker({std::nullopt, limits.max_time});
  const int cells = static_cast<int>(g.size().cells());
  const int top = limits.max_size ? std::min(*limits.max_size, cells) : cells;
  double last = 0.0;
  for (int m = 1; m <= top; ++m) {
    DeviationEnumerator e(g, m, coll.families());
    const auto status = e.enumerate(
        [&](const Grid& alt) {
          UnavoidableSet set = diff_cells(g, alt);
          assert(static_cast<int>(set.size()) == m);
          assert(is_minimal_unavoidable(g, set.cells()));
          const double now = tracker.elapsed_seconds();
          SetMetadata meta{coll.size() + 1, now - last, now, m};
          last = now;
          e.add_nogood(set.cells());
          coll.insert(std::move(set), meta);
          if (progress) progress({meta.generation_index, m, now});
          return coll.size() < limits.max_sets;
        },
        tracker);
    if (status == SearchStatus::Interrupted) {
      coll.set_interrupted(true);
      break;
    }
    if (status == SearchStatus::Found) break;
    coll.set_complete_through(m);
  }
  return coll;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::CorruptFile, "line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) corrupt(line, "bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_collection(const UnavoidableCollection& c, std::ostream& out) {
  out << "MSCPUNAV v1 n=" << c.grid_size().side() << " fingerprint=" << fingerprint_hex(c.fingerprint())
      << " complete_through=" << c.complete_through() << " interrupted=" << (c.interrupted() ? 1 : 0)
      << '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& m = c.metadata()[i];
    out << "m=" << c[i].size() << " index=" << m.generation_index
        << " time=" << format_double(m.generation_seconds)
        << " elapsed=" << format_double(m.elapsed_seconds) << " found_at=" << m.m << ": "
        << c[i].to_string() << '\n';
  }
}

void save_collection(const UnavoidableCollection& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_collection(c, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

UnavoidableCollection read_collection(std::istream& in, const Grid& g) {
  std::string line;
  std::size_t no = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::CorruptFile, "empty collection file");
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "MSCPUNAV" || version != "v1") corrupt(no, "missing MSCPUNAV v1 header");
  int n = -1;
  std::optional<std::uint64_t> fp;
  int complete = 0;
  bool interrupted = false;
  for (std::string tok; header >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) corrupt(no, "bad header field " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string_view value = std::string_view(tok).substr(eq + 1);
    if (key == "n") n = parse_number<int>(value, no);
    else if (key == "fingerprint") {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v, 16);
      if (ec != std::errc{} || p != value.data() + value.size()) corrupt(no, "bad fingerprint");
      fp = v;
    } else if (key == "complete_through") complete = parse_number<int>(value, no);
    else if (key == "interrupted") interrupted = parse_number<int>(value, no) != 0;
  }
  if (n < 0 || !fp) corrupt(no, "header needs n= and fingerprint=");
  if (n != g.side() || *fp != fingerprint(g))
    throw Error(ErrorCode::FingerprintMismatch,
                "collection belongs to fingerprint " + fingerprint_hex(*fp) + ", grid is " +
                    fingerprint_hex(fingerprint(g)));
  UnavoidableCollection coll(g);
  coll.set_complete_through(complete);
  coll.set_interrupted(interrupted);
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) corrupt(no, "missing ':'");
    std::istringstream head(line.substr(0, colon));
    std::optional<std::size_t> size;
    SetMetadata meta;
    meta.generation_index = coll.size() + 1;
    for (std::string tok; head >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) corrupt(no, "bad field " + tok);
      const std::string key = tok.substr(0, eq);
      const std::string_view value = std::string_view(tok).substr(eq + 1);
      if (key == "m") size = parse_number<std::size_t>(value, no);
      else if (key == "index") meta.generation_index = parse_number<std::size_t>(value, no);
      else if (key == "time") meta.generation_seconds = parse_number<double>(value, no);
      else if (key == "elapsed") meta.elapsed_seconds = parse_number<double>(value, no);
      else if (key == "found_at") meta.m = parse_number<int>(value, no);
    }
    if (!size) corrupt(no, "missing m=");
    IndexSet cells(g.size().cells());
    std::istringstream body(line.substr(colon + 1));
    for (std::string tok; body >> tok;) {
      const auto comma = tok.find(',');
      if (comma == std::string::npos) corrupt(no, "bad cell " + tok);
      const int r = parse_number<int>(std::string_view(tok).substr(0, comma), no);
      const int c = parse_number<int>(std::string_view(tok).substr(comma + 1), no);
      if (r < 1 || r > n || c < 1 || c > n) corrupt(no, "cell out of bounds " + tok);
      cells.insert(Cell{r, c}.index(n));
    }
    if (cells.count() != *size) corrupt(no, "m= does not match the number of cells");
    if (meta.m == 0) meta.m = static_cast<int>(*size);
    UnavoidableSet set(g.size(), std::move(cells));
    if (!coll.admits(set)) corrupt(no, "antichain violated by {" + set.to_string() + "}");
    coll.insert(std::move(set), meta);
  }
  return coll;
}

UnavoidableCollection load_collection(const std::string& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_collection(in, g);
}

}  // namespace mscp
