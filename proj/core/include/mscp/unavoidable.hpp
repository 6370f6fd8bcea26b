#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mscp/budget.hpp"
#include "mscp/grid.hpp"
#include "mscp/index_set.hpp"

namespace mscp {

// Cells on which some grid G' != G differs from G. Members are kept as a
// cell-index bitset, so the ascending cell sequence is the canonical form.
class UnavoidableSet {
 public:
  UnavoidableSet(GridSize size, IndexSet cells);

  GridSize grid_size() const { return size_; }
  const IndexSet& cells() const { return cells_; }
  std::size_t size() const { return cells_.count(); }
  std::vector<Cell> sorted_cells() const { return cells_of(cells_, size_.side()); }

  // "r,c r,c ..." in canonical order.
  std::string to_string() const;

  friend bool operator==(const UnavoidableSet&, const UnavoidableSet&) = default;

 private:
  GridSize size_;
  IndexSet cells_;
};

struct SetMetadata {
  std::size_t generation_index = 0;  // 1-based emission order
  double generation_seconds = 0.0;   // time spent finding this set
  double elapsed_seconds = 0.0;      // cumulative time at emission
  int m = 0;                         // deviation count it was found at

  friend bool operator==(const SetMetadata&, const SetMetadata&) = default;
};

// Antichain of minimal unavoidable sets of one grid, in insertion order.
class UnavoidableCollection {
 public:
  explicit UnavoidableCollection(const Grid& grid);
  UnavoidableCollection(GridSize size, std::uint64_t fingerprint);

  GridSize grid_size() const { return size_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  const std::vector<UnavoidableSet>& sets() const { return sets_; }
  const std::vector<SetMetadata>& metadata() const { return meta_; }
  const UnavoidableSet& operator[](std::size_t i) const { return sets_[i]; }

  // Throws Error(CorruptFile) if the set is a subset or superset of a member.
  void insert(UnavoidableSet set, SetMetadata meta = {});
  // Same check, without throwing.
  bool admits(const UnavoidableSet& set) const;

  // Largest m such that every minimal unavoidable set of size <= m is present
  // (0 when unknown).
  int complete_through() const { return complete_through_; }
  void set_complete_through(int m) { complete_through_ = m; }
  // Generation stopped early (budget or caller interruption, not max_sets).
  bool interrupted() const { return interrupted_; }
  void set_interrupted(bool v) { interrupted_ = v; }

  std::vector<IndexSet> families() const;
  // First `count` members, as a new collection.
  UnavoidableCollection prefix(std::size_t count) const;

  friend bool operator==(const UnavoidableCollection&, const UnavoidableCollection&) = default;

 private:
  GridSize size_;
  std::uint64_t fingerprint_;
  std::vector<UnavoidableSet> sets_;
  std::vector<SetMetadata> meta_;
  int complete_through_ = 0;
  bool interrupted_ = false;
};

// Throws Error(IdenticalGrids) when g == g2, Error(SizeMismatch) on size.
UnavoidableSet diff_cells(const Grid& g, const Grid& g2);

// True iff some G' != G keeps every cell outside `cells`.
// Throws Error(Interrupted) when the budget runs out.
bool is_unavoidable(const Grid& g, const IndexSet& cells, const SearchBudget& budget = {});

// Deletion-based shrink in canonical cell order; when a smaller alternate is
// found, the current set jumps to that alternate's difference set.
// Throws Error(NotUnavoidable) if `cells` is not unavoidable.
UnavoidableSet minimalize(const Grid& g, const IndexSet& cells, const SearchBudget& budget = {});

// Deletion check: unavoidable, and no single-cell removal stays unavoidable.
bool is_minimal_unavoidable(const Grid& g, const IndexSet& cells);

struct GenerationLimits {
  std::size_t max_sets = 5000;
  std::optional<int> max_size;
  std::optional<std::chrono::duration<double>> max_time;
};

struct ProgressRow {
  std::size_t set_index = 0;
  int m = 0;
  double elapsed_seconds = 0.0;
};
using ProgressSink = std::function<void(const ProgressRow&)>;

// Iterates m = 1, 2, ...; at each m enumerates grids differing from g in
// exactly m cells with every earlier set as a nogood, emitting each
// difference set. Stops at the limits; a time-out marks the result
// interrupted.
UnavoidableCollection generate_all(const Grid& g, const GenerationLimits& limits = {},
                                   const ProgressSink& progress = {});

// Plain-text format:
//   MSCPUNAV v1 n=<n> fingerprint=<16 hex> [complete_through=<m>] [interrupted=<0|1>]
//   m=<size> [index=<i> time=<s> elapsed=<s>]: r,c r,c ...
void save_collection(const UnavoidableCollection& c, const std::string& path);
void write_collection(const UnavoidableCollection& c, std::ostream& out);
// Verifies the fingerprint against `g` and the antichain invariant.
UnavoidableCollection load_collection(const std::string& path, const Grid& g);
UnavoidableCollection read_collection(std::istream& in, const Grid& g);

std::string fingerprint_hex(std::uint64_t fp);

}  // namespace mscp
