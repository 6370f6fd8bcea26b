#include "mscp/engine.hpp"

#include <bit>
#include <string>

#include "mscp/error.hpp"

namespace mscp {

namespace {

using Mask = std::uint64_t;

inline Mask bit_of(int digit) { return Mask{1} << (digit - 1); }

enum class Flow { Continue, Stop, Interrupted };

// Backtracking over one-hot cell assignments held as per-unit digit masks.
// A cell's candidates are always full & ~(row | col | box) used digits.
//
// Optional layers on top of plain completion:
//   - target + require_differ: the completion must differ from target (N1),
//   - target + exact deviations m: exactly m cells differ from target (D1),
//   - nogoods: some cell of every nogood keeps its target digit (N2).
class Search {
 public:
  using Visitor = std::function<bool(std::span<const std::uint8_t>)>;

  Search(Layout layout, BudgetTracker& budget) : layout_(layout), budget_(budget) {
    const int n = layout.n;
    if (n < 1 || n > 64) throw Error(ErrorCode::InvalidArgument, "side must be in [1, 64]");
    if (layout.box != 0 && layout.box * layout.box != n)
      throw Error(ErrorCode::InvalidArgument, "box side must square to n");
    cells_ = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    full_ = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
    const int units = layout.box ? 3 * n : 2 * n;
    used_.assign(static_cast<std::size_t>(units), 0);
    unit_cells_.assign(static_cast<std::size_t>(units), {});
    row_.resize(cells_);
    col_.resize(cells_);
    box_.resize(cells_);
    for (std::size_t c = 0; c < cells_; ++c) {
      const int r = static_cast<int>(c) / n;
      const int k = static_cast<int>(c) % n;
      row_[c] = r;
      col_[c] = n + k;
      box_[c] = layout.box ? 2 * n + (r / layout.box) * layout.box + k / layout.box : -1;
      unit_cells_[static_cast<std::size_t>(row_[c])].push_back(static_cast<int>(c));
      unit_cells_[static_cast<std::size_t>(col_[c])].push_back(static_cast<int>(c));
      if (box_[c] >= 0) unit_cells_[static_cast<std::size_t>(box_[c])].push_back(static_cast<int>(c));
    }
    val_.assign(cells_, 0);
    empty_ = cells_;
    trail_.reserve(cells_);
  }

  // False when the givens conflict with each other.
  bool load(std::span<const std::uint8_t> givens) {
    if (givens.size() != cells_) throw Error(ErrorCode::SizeMismatch, "givens size mismatch");
    for (std::size_t c = 0; c < cells_; ++c) {
      const int d = givens[c];
      if (d == 0) continue;
      if (d > layout_.n) throw Error(ErrorCode::IllegalCharacter, "digit out of range");
      if (!(candidates(c) & bit_of(d))) return false;
      if (!assign(c, d)) return false;
    }
    return true;
  }

  void set_target(std::span<const std::uint8_t> target) {
    if (target.size() != cells_) throw Error(ErrorCode::SizeMismatch, "target size mismatch");
    target_.assign(target.begin(), target.end());
  }
  void require_differ() { require_differ_ = true; }
  void exact_deviations(int m) { exact_ = m; }

  void add_nogood(const IndexSet& cells) {
    if (cells.universe() != cells_) throw Error(ErrorCode::SizeMismatch, "nogood universe mismatch");
    Nogood ng;
    cells.for_each([&](std::size_t c) {
      ng.cells.push_back(static_cast<int>(c));
      if (val_[c] != 0 && val_[c] != target_[c]) ++ng.deviating;
    });
    const int id = static_cast<int>(nogoods_.size());
    if (cell_nogoods_.empty()) cell_nogoods_.assign(cells_, {});
    for (int c : ng.cells) cell_nogoods_[static_cast<std::size_t>(c)].push_back(id);
    nogoods_.push_back(std::move(ng));
  }

  Flow run(const Visitor& visit) {
    visit_ = &visit;
    return dfs();
  }

 private:
  struct Nogood {
    std::vector<int> cells;
    int deviating = 0;
  };

  bool tracking() const { return !target_.empty(); }

  Mask candidates(std::size_t c) const {
    Mask u = used_[static_cast<std::size_t>(row_[c])] | used_[static_cast<std::size_t>(col_[c])];
    if (box_[c] >= 0) u |= used_[static_cast<std::size_t>(box_[c])];
    return full_ & ~u;
  }

  // Records the assignment on the trail even when it violates a deviation
  // layer, so undo stays symmetric; the return value reports the violation.
  bool assign(std::size_t c, int d) {
    const Mask b = bit_of(d);
    val_[c] = static_cast<std::uint8_t>(d);
    used_[static_cast<std::size_t>(row_[c])] |= b;
    used_[static_cast<std::size_t>(col_[c])] |= b;
    if (box_[c] >= 0) used_[static_cast<std::size_t>(box_[c])] |= b;
    trail_.push_back(static_cast<int>(c));
    --empty_;
    bool ok = true;
    if (tracking() && d != target_[c]) {
      ++deviations_;
      if (exact_ >= 0 && deviations_ > exact_) ok = false;
      if (!cell_nogoods_.empty()) {
        for (int id : cell_nogoods_[c]) {
          Nogood& ng = nogoods_[static_cast<std::size_t>(id)];
          ++ng.deviating;
          const int size = static_cast<int>(ng.cells.size());
          if (ng.deviating >= size)
            ok = false;
          else if (ng.deviating == size - 1)
            pending_.push_back(id);
        }
      }
    }
    return ok;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto c = static_cast<std::size_t>(trail_.back());
      trail_.pop_back();
      const int d = val_[c];
      const Mask b = ~bit_of(d);
      used_[static_cast<std::size_t>(row_[c])] &= b;
      used_[static_cast<std::size_t>(col_[c])] &= b;
      if (box_[c] >= 0) used_[static_cast<std::size_t>(box_[c])] &= b;
      val_[c] = 0;
      ++empty_;
      if (tracking() && d != target_[c]) {
        --deviations_;
        if (!cell_nogoods_.empty())
          for (int id : cell_nogoods_[c]) --nogoods_[static_cast<std::size_t>(id)].deviating;
      }
    }
  }

  // Nogood with one non-deviating cell left: that cell keeps its target digit.
  bool settle_pending(bool& progress) {
    while (!pending_.empty()) {
      const int id = pending_.back();
      pending_.pop_back();
      const Nogood& ng = nogoods_[static_cast<std::size_t>(id)];
      const int size = static_cast<int>(ng.cells.size());
      if (ng.deviating >= size) return false;
      if (ng.deviating != size - 1) continue;
      for (int cell : ng.cells) {
        const auto c = static_cast<std::size_t>(cell);
        if (val_[c] != 0) continue;
        if (!(candidates(c) & bit_of(target_[c]))) return false;
        if (!assign(c, target_[c])) return false;
        progress = true;
        break;
      }
    }
    return true;
  }

  bool propagate() {
    bool progress = true;
    while (progress) {
      progress = false;
      if (!settle_pending(progress)) return false;
      int forced = 0;
      int can_deviate = 0;
      for (std::size_t c = 0; c < cells_ && empty_ > 0; ++c) {
        if (val_[c] != 0) continue;
        const Mask cand = candidates(c);
        if (cand == 0) return false;
        if ((cand & (cand - 1)) == 0) {
          if (!assign(c, std::countr_zero(cand) + 1)) return false;
          progress = true;
          continue;
        }
        if (exact_ >= 0) {
          const Mask own = bit_of(target_[c]);
          if (!(cand & own)) ++forced;
          if (cand & ~own) ++can_deviate;
        }
      }
      if (progress) continue;
      if (!hidden_singles(progress)) return false;
      if (progress) continue;
      if (exact_ >= 0) {
        // Lower bound: cells already deviating plus cells that lost their
        // target digit. Upper bound: plus every cell that still could deviate.
        if (deviations_ + forced > exact_) return false;
        if (deviations_ + can_deviate < exact_) return false;
        if (deviations_ + forced == exact_) {
          for (std::size_t c = 0; c < cells_; ++c) {
            if (val_[c] != 0) continue;
            if (candidates(c) & bit_of(target_[c])) {
              if (!assign(c, target_[c])) return false;
              progress = true;
            }
          }
        }
      }
    }
    return true;
  }

  bool hidden_singles(bool& progress) {
    for (std::size_t u = 0; u < used_.size(); ++u) {
      const Mask missing = full_ & ~used_[u];
      if (!missing) continue;
      Mask once = 0;
      Mask twice = 0;
      for (int cell : unit_cells_[u]) {
        const auto c = static_cast<std::size_t>(cell);
        if (val_[c] != 0) continue;
        const Mask cand = candidates(c);
        twice |= once & cand;
        once |= cand;
      }
      if (missing & ~once) return false;
      Mask singles = missing & once & ~twice;
      while (singles) {
        const int d = std::countr_zero(singles) + 1;
        singles &= singles - 1;
        for (int cell : unit_cells_[u]) {
          const auto c = static_cast<std::size_t>(cell);
          if (val_[c] == 0 && (candidates(c) & bit_of(d))) {
            if (!assign(c, d)) return false;
            progress = true;
            break;
          }
        }
        // An earlier single may have taken the last place of this digit.
        if (!(used_[u] & bit_of(d))) return false;
      }
    }
    return true;
  }

  // Most constrained cell, ties by index. Under a deviation constraint, cells
  // that have lost their target digit are branched first.
  std::size_t choose() const {
    std::size_t best = cells_;
    int best_count = 65;
    bool best_forced = false;
    for (std::size_t c = 0; c < cells_; ++c) {
      if (val_[c] != 0) continue;
      const Mask cand = candidates(c);
      const int k = std::popcount(cand);
      const bool forced = exact_ >= 0 && !(cand & bit_of(target_[c]));
      if (best == cells_ || (forced && !best_forced) || (forced == best_forced && k < best_count)) {
        best = c;
        best_count = k;
        best_forced = forced;
      }
    }
    return best;
  }

  bool accept_leaf() const {
    if (exact_ >= 0 && deviations_ != exact_) return false;
    if (require_differ_ && deviations_ == 0) return false;
    return true;
  }

  Flow dfs() {
    if (!budget_.charge()) return Flow::Interrupted;
    const std::size_t mark = trail_.size();
    Flow flow = Flow::Continue;
    if (propagate()) {
      if (empty_ == 0) {
        if (accept_leaf() && !(*visit_)(val_)) flow = Flow::Stop;
      } else {
        const std::size_t c = choose();
        Mask cand = candidates(c);
        while (cand && flow == Flow::Continue) {
          const int d = std::countr_zero(cand) + 1;
          cand &= cand - 1;
          const std::size_t inner = trail_.size();
          if (assign(c, d)) flow = dfs();
          undo_to(inner);
        }
      }
    }
    pending_.clear();
    undo_to(mark);
    return flow;
  }

  Layout layout_;
  BudgetTracker& budget_;
  std::size_t cells_ = 0;
  Mask full_ = 0;
  std::vector<Mask> used_;
  std::vector<std::vector<int>> unit_cells_;
  std::vector<int> row_, col_, box_;
  std::vector<std::uint8_t> val_;
  std::vector<int> trail_;
  std::size_t empty_ = 0;

  std::vector<std::uint8_t> target_;
  bool require_differ_ = false;
  int exact_ = -1;
  int deviations_ = 0;
  std::vector<Nogood> nogoods_;
  std::vector<std::vector<int>> cell_nogoods_;
  std::vector<int> pending_;

  const Visitor* visit_ = nullptr;
};

Layout layout_of(GridSize size) { return {size.side(), size.box()}; }

SearchStatus status_of(Flow flow) {
  switch (flow) {
    case Flow::Stop: return SearchStatus::Found;
    case Flow::Interrupted: return SearchStatus::Interrupted;
    case Flow::Continue: break;
  }
  return SearchStatus::Exhausted;
}

}  // namespace

namespace engine {

CountResult count_completions(Layout layout, std::span<const std::uint8_t> givens,
                              std::uint64_t limit, const SearchBudget& budget) {
  BudgetTracker tracker(budget);
  Search search(layout, tracker);
  CountResult result;
  if (limit == 0 || !search.load(givens)) return result;
  const Search::Visitor visit = [&](std::span<const std::uint8_t>) {
    return ++result.count < limit;
  };
  result.interrupted = search.run(visit) == Flow::Interrupted;
  result.nodes = tracker.nodes();
  return result;
}

Outcome<std::vector<std::uint8_t>> find_alternate(Layout layout,
                                                  std::span<const std::uint8_t> target,
                                                  const IndexSet& clues,
                                                  const SearchBudget& budget) {
  BudgetTracker tracker(budget);
  Search search(layout, tracker);
  std::vector<std::uint8_t> givens(target.size(), 0);
  if (clues.universe() != target.size())
    throw Error(ErrorCode::SizeMismatch, "clue mask universe does not match target");
  clues.for_each([&](std::size_t i) { givens[i] = target[i]; });
  Outcome<std::vector<std::uint8_t>> out;
  search.set_target(target);
  search.require_differ();
  if (!search.load(givens))
    throw Error(ErrorCode::InvalidArgument, "target conflicts with itself on the clues");
  const Search::Visitor visit = [&](std::span<const std::uint8_t> sol) {
    out.value.emplace(sol.begin(), sol.end());
    return false;
  };
  out.status = status_of(search.run(visit));
  out.nodes = tracker.nodes();
  return out;
}

Outcome<std::vector<std::uint8_t>> solve(Layout layout, std::span<const std::uint8_t> givens,
                                         const SearchBudget& budget) {
  BudgetTracker tracker(budget);
  Search search(layout, tracker);
  Outcome<std::vector<std::uint8_t>> out;
  if (!search.load(givens)) return out;
  const Search::Visitor visit = [&](std::span<const std::uint8_t> sol) {
    out.value.emplace(sol.begin(), sol.end());
    return false;
  };
  out.status = status_of(search.run(visit));
  out.nodes = tracker.nodes();
  return out;
}

Outcome<std::vector<std::uint8_t>> find_deviating(Layout layout,
                                                  std::span<const std::uint8_t> target, int m,
                                                  std::span<const IndexSet> nogoods,
                                                  const SearchBudget& budget) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "deviation count must be >= 1");
  BudgetTracker tracker(budget);
  Search search(layout, tracker);
  search.set_target(target);
  search.exact_deviations(m);
  for (const auto& ng : nogoods) search.add_nogood(ng);
  Outcome<std::vector<std::uint8_t>> out;
  const Search::Visitor visit = [&](std::span<const std::uint8_t> sol) {
    out.value.emplace(sol.begin(), sol.end());
    return false;
  };
  out.status = status_of(search.run(visit));
  out.nodes = tracker.nodes();
  return out;
}

}  // namespace engine

CountResult count_solutions(const Puzzle& puzzle, std::uint64_t limit,
                            const SearchBudget& budget) {
  return engine::count_completions(layout_of(puzzle.size()), puzzle.entries(), limit, budget);
}

GridOutcome find_alternate(const Grid& grid, const CluePattern& pattern,
                           const SearchBudget& budget) {
  if (!(grid.size() == pattern.size()))
    throw Error(ErrorCode::SizeMismatch, "pattern and grid sizes differ");
  auto raw = engine::find_alternate(layout_of(grid.size()), grid.entries(), pattern.mask(), budget);
  GridOutcome out{raw.status, std::nullopt, raw.nodes};
  if (raw.value) out.value.emplace(grid.size(), std::move(*raw.value));
  return out;
}

GridOutcome solve_puzzle(const Puzzle& puzzle, const SearchBudget& budget) {
  auto raw = engine::solve(layout_of(puzzle.size()), puzzle.entries(), budget);
  GridOutcome out{raw.status, std::nullopt, raw.nodes};
  if (raw.value) out.value.emplace(puzzle.size(), std::move(*raw.value));
  return out;
}

struct DeviationEnumerator::Impl {
  Impl(const Grid& g, int m) : target(g), exact(m) {}
  Grid target;
  int exact;
  std::vector<IndexSet> nogoods;
  Search* live = nullptr;
};

DeviationEnumerator::DeviationEnumerator(const Grid& target, int m,
                                         std::span<const IndexSet> nogoods)
    : impl_(std::make_unique<Impl>(target, m)) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "deviation count must be >= 1");
  for (const auto& ng : nogoods) add_nogood(ng);
}

DeviationEnumerator::~DeviationEnumerator() = default;

void DeviationEnumerator::add_nogood(const IndexSet& cells) {
  if (cells.universe() != impl_->target.size().cells())
    throw Error(ErrorCode::SizeMismatch, "nogood universe does not match grid");
  impl_->nogoods.push_back(cells);
  if (impl_->live) impl_->live->add_nogood(cells);
}

SearchStatus DeviationEnumerator::enumerate(const std::function<bool(const Grid&)>& on_grid,
                                            BudgetTracker& budget) {
  const Grid& g = impl_->target;
  Search search(layout_of(g.size()), budget);
  search.set_target(g.entries());
  search.exact_deviations(impl_->exact);
  for (const auto& ng : impl_->nogoods) search.add_nogood(ng);
  impl_->live = &search;
  const Search::Visitor visit = [&](std::span<const std::uint8_t> sol) {
    return on_grid(Grid(g.size(), std::vector<std::uint8_t>(sol.begin(), sol.end())));
  };
  Flow flow = Flow::Continue;
  try {
    flow = search.run(visit);
  } catch (...) {
    impl_->live = nullptr;
    throw;
  }
  impl_->live = nullptr;
  return status_of(flow);
}

GridOutcome find_deviating_grid(const DeviationConstraint& constraint, const SearchBudget& budget) {
  for (const auto& ng : constraint.nogoods)
    if (ng.universe() != constraint.target.size().cells())
      throw Error(ErrorCode::InvalidArgument, "nogood out of bounds");
  DeviationEnumerator e(constraint.target, constraint.exact_deviations, constraint.nogoods);
  BudgetTracker tracker(budget);
  GridOutcome out;
  out.status = e.enumerate(
      [&](const Grid& found) {
        out.value = found;
        return false;
      },
      tracker);
  out.nodes = tracker.nodes();
  return out;
}

}  // namespace mscp
