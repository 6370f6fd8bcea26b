#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mscp/budget.hpp"
#include "mscp/grid.hpp"
#include "mscp/index_set.hpp"

namespace mscp {

enum class SearchStatus { Found, Exhausted, Interrupted };

struct CountResult {
  std::uint64_t count = 0;
  bool interrupted = false;
  std::uint64_t nodes = 0;
};

template <class T>
struct Outcome {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<T> value;
  std::uint64_t nodes = 0;

  bool found() const { return status == SearchStatus::Found; }
  bool exhausted() const { return status == SearchStatus::Exhausted; }
  bool interrupted() const { return status == SearchStatus::Interrupted; }
};
using GridOutcome = Outcome<Grid>;

// Grid differing from `target` in exactly `exact_deviations` cells, with at
// least one cell of every nogood keeping its target digit.
struct DeviationConstraint {
  Grid target;
  int exact_deviations = 1;
  std::vector<IndexSet> nogoods;
};

// Exact number of completions when below `limit`, otherwise `limit`.
CountResult count_solutions(const Puzzle& puzzle, std::uint64_t limit,
                            const SearchBudget& budget = {});

// A completion of apply_pattern(grid, pattern) other than grid itself.
// Exhausted means the pattern forces a unique solution.
GridOutcome find_alternate(const Grid& grid, const CluePattern& pattern,
                           const SearchBudget& budget = {});

// Exhausted means infeasible.
GridOutcome find_deviating_grid(const DeviationConstraint& constraint,
                                const SearchBudget& budget = {});

// First completion in search order. Exhausted means unsatisfiable.
GridOutcome solve_puzzle(const Puzzle& puzzle, const SearchBudget& budget = {});

// Resumable enumeration of all grids with exactly m deviations from a target,
// subject to nogoods. Nogoods added from inside the callback prune the rest of
// the same traversal, so the emission order matches re-running
// find_deviating_grid after every addition.
class DeviationEnumerator {
 public:
  DeviationEnumerator(const Grid& target, int m, std::span<const IndexSet> nogoods = {});
  ~DeviationEnumerator();
  DeviationEnumerator(const DeviationEnumerator&) = delete;
  DeviationEnumerator& operator=(const DeviationEnumerator&) = delete;

  void add_nogood(const IndexSet& cells);

  // `on_grid` returns false to stop. Found = stopped by the callback,
  // Exhausted = traversal complete.
  SearchStatus enumerate(const std::function<bool(const Grid&)>& on_grid, BudgetTracker& budget);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Layout-generic entry points. box == 0 drops the box constraints, which
// turns the engine into a Latin-square completion engine (any n <= 64).
struct Layout {
  int n = 9;
  int box = 3;
};

namespace engine {

CountResult count_completions(Layout layout, std::span<const std::uint8_t> givens,
                              std::uint64_t limit, const SearchBudget& budget = {});

// Completion of the cells in `clues` (taking target's digits there) that
// differs from target somewhere.
Outcome<std::vector<std::uint8_t>> find_alternate(Layout layout,
                                                  std::span<const std::uint8_t> target,
                                                  const IndexSet& clues,
                                                  const SearchBudget& budget = {});

Outcome<std::vector<std::uint8_t>> solve(Layout layout, std::span<const std::uint8_t> givens,
                                         const SearchBudget& budget = {});

// Assignment differing from target in exactly m cells, keeping a target
// digit somewhere in every nogood.
Outcome<std::vector<std::uint8_t>> find_deviating(Layout layout,
                                                  std::span<const std::uint8_t> target, int m,
                                                  std::span<const IndexSet> nogoods,
                                                  const SearchBudget& budget = {});

}  // namespace engine

}  // namespace mscp
