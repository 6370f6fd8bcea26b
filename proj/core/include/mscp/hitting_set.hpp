#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mscp/budget.hpp"
#include "mscp/index_set.hpp"

namespace mscp {

struct HittingInstance {
  std::size_t universe = 0;
  std::vector<IndexSet> family;
  // Either may be left default-constructed (universe 0) for "none".
  IndexSet forced_in;
  IndexSet forced_out;
};

enum class HittingStatus { Optimal, Interrupted, Infeasible };

struct HittingSolution {
  HittingStatus status = HittingStatus::Optimal;
  IndexSet cells;
  std::size_t value = 0;
  bool proven_optimal = false;
  std::size_t lower_bound = 0;
  std::uint64_t nodes = 0;
};

// Minimum-cardinality hitting set. Exact search runs size-bounded passes
// k = packing bound, k+1, ... of the enumerator below, after a root-only
// element-dominance reduction; the first pass that finds a set is optimal,
// and the reported set is the first one met in that pass's canonical DFS
// order. On interruption the greedy incumbent is returned together with the
// bound k of the pass in progress. `upper_hint` promises a hitting set of at
// most that size and caps the passes; a false promise throws InvalidArgument.
HittingSolution min_hitting_set(const HittingInstance& instance,
                                std::optional<std::size_t> upper_hint = std::nullopt,
                                const SearchBudget& budget = {});

// |forced_in| plus the size of a pairwise-disjoint subfamily of the sets
// it leaves unhit, built greedily smallest-set-first (cells in forced_out
// don't count). Always a lower bound on the optimum.
std::size_t disjoint_packing_bound(const HittingInstance& instance);

// Depth-first enumeration of hitting sets of size <= max_size. Branches on
// the unhit set with the fewest allowed cells (lowest index on ties), trying
// its cells in ascending order with the earlier ones excluded, so subtrees are
// disjoint; prunes with a greedy disjoint-packing bound over the unhit sets.
//
// Sets may be added between calls to next(). The search then continues
// under the enlarged family without revisiting finished subtrees, which is
// sound because a larger family only removes hitting sets. The last reported
// leaf is re-expanded if the new sets leave it unhit.
class HittingSetEnumerator {
 public:
  enum class Step { Found, Exhausted, Interrupted };

  // `allowed` restricts the cells that may be chosen (default: all).
  HittingSetEnumerator(std::size_t universe, std::span<const IndexSet> family,
                       std::size_t max_size, std::optional<IndexSet> allowed = std::nullopt);

  void add_set(const IndexSet& set);
  Step next(BudgetTracker& budget);

  // Valid after next() returned Found.
  const IndexSet& current() const { return current_; }
  std::size_t family_size() const { return sizes_.size(); }
  std::size_t max_size() const { return max_size_; }

 private:
  enum class State { Fresh, Branching, LeafReported };
  struct Frame {
    std::vector<std::uint64_t> chosen;
    std::vector<std::uint64_t> forbidden;
    std::vector<std::uint32_t> unhit;
    std::vector<std::uint32_t> branch;
    std::size_t next = 0;
    std::size_t known = 0;
    std::size_t depth = 0;
    State state = State::Fresh;
    // One cell left: branch holds the common cells of all unhit sets, and
    // unhit entries from `planned` on arrived afterwards.
    bool last = false;
    std::size_t planned = 0;
  };

  const std::uint64_t* set_words(std::size_t i) const { return &words_[i * width_]; }
  void refresh(Frame& f);
  // False when the frame can be pruned; otherwise fills f.branch.
  bool plan(Frame& f);
  Frame& push();
  void to_index_set(const std::vector<std::uint64_t>& words, IndexSet& out) const;

  std::size_t universe_;
  std::size_t width_;
  std::size_t max_size_;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> sizes_;
  std::vector<Frame> stack_;
  std::size_t top_ = 0;
  IndexSet current_;

  std::vector<std::uint32_t> scratch_eff_;
  std::vector<std::uint32_t> scratch_order_;
  std::vector<std::uint32_t> scratch_bucket_;
  std::vector<std::uint64_t> scratch_union_;
};

}  // namespace mscp
