#include "mscp/hitting_set.hpp"

#include <algorithm>
#include <bit>

#include "mscp/error.hpp"

namespace mscp {

namespace {

std::size_t words_for(std::size_t universe) { return (universe + 63) / 64; }

}  // namespace

HittingSetEnumerator::HittingSetEnumerator(std::size_t universe, std::span<const IndexSet> family,
                                           std::size_t max_size, std::optional<IndexSet> allowed)
    : universe_(universe), width_(words_for(universe)), max_size_(max_size), current_(universe) {
  for (const auto& s : family) add_set(s);
  stack_.reserve(max_size_ + 2);
  Frame& root = push();
  root.chosen.assign(width_, 0);
  root.forbidden.assign(width_, 0);
  if (allowed) {
    if (allowed->universe() != universe_)
      throw Error(ErrorCode::SizeMismatch, "allowed-cell universe mismatch");
    const IndexSet out = allowed->complement();
    std::copy(out.words().begin(), out.words().end(), root.forbidden.begin());
  }
  root.unhit.clear();
  root.known = 0;
  root.depth = 0;
  root.state = State::Fresh;
  scratch_union_.assign(width_, 0);
}

void HittingSetEnumerator::add_set(const IndexSet& set) {
  if (set.universe() != universe_) throw Error(ErrorCode::SizeMismatch, "set universe mismatch");
  const auto w = set.words();
  words_.insert(words_.end(), w.begin(), w.end());
  sizes_.push_back(static_cast<std::uint32_t>(set.count()));
}

HittingSetEnumerator::Frame& HittingSetEnumerator::push() {
  if (stack_.size() <= top_) stack_.emplace_back();
  return stack_[top_++];
}

void HittingSetEnumerator::to_index_set(const std::vector<std::uint64_t>& words, IndexSet& out) const {
  out = IndexSet(universe_);
  for (std::size_t k = 0; k < width_; ++k) {
    std::uint64_t w = words[k];
    while (w) {
      out.insert(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
}

void HittingSetEnumerator::refresh(Frame& f) {
  const std::size_t total = sizes_.size();
  for (std::size_t i = f.known; i < total; ++i) {
    const std::uint64_t* s = set_words(i);
    bool hit = false;
    for (std::size_t k = 0; k < width_ && !hit; ++k) hit = (s[k] & f.chosen[k]) != 0;
    if (!hit) f.unhit.push_back(static_cast<std::uint32_t>(i));
  }
  f.known = total;
}

bool HittingSetEnumerator::plan(Frame& f) {
  if (f.depth >= max_size_) return false;
  const std::size_t unhit = f.unhit.size();
  scratch_eff_.resize(unhit);
  std::size_t best = 0;
  std::uint32_t best_size = ~0U;
  std::uint32_t largest = 0;
  for (std::size_t t = 0; t < unhit; ++t) {
    const std::uint64_t* s = set_words(f.unhit[t]);
    std::uint32_t eff = 0;
    for (std::size_t k = 0; k < width_; ++k)
      eff += static_cast<std::uint32_t>(std::popcount(s[k] & ~f.forbidden[k]));
    if (eff == 0) return false;
    scratch_eff_[t] = eff;
    if (eff < best_size) {
      best_size = eff;
      best = t;
    }
    largest = std::max(largest, eff);
  }

  const std::size_t budget = max_size_ - f.depth;
  f.branch.clear();
  f.next = 0;
  f.last = budget == 1;
  if (f.last) {
    std::fill(scratch_union_.begin(), scratch_union_.end(), ~std::uint64_t{0});
    for (std::uint32_t i : f.unhit) {
      const std::uint64_t* s = set_words(i);
      for (std::size_t k = 0; k < width_; ++k) scratch_union_[k] &= s[k] & ~f.forbidden[k];
    }
    for (std::size_t k = 0; k < width_; ++k) {
      std::uint64_t w = scratch_union_[k];
      while (w) {
        f.branch.push_back(static_cast<std::uint32_t>(k * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    f.planned = unhit;
    return !f.branch.empty();
  }

  // Greedy disjoint packing, smallest effective sets first (counting sort).
  if (unhit > budget) {
    scratch_bucket_.assign(largest + 2, 0);
    for (std::size_t t = 0; t < unhit; ++t) ++scratch_bucket_[scratch_eff_[t] + 1];
    for (std::size_t b = 1; b < scratch_bucket_.size(); ++b) scratch_bucket_[b] += scratch_bucket_[b - 1];
    scratch_order_.resize(unhit);
    for (std::size_t t = 0; t < unhit; ++t)
      scratch_order_[scratch_bucket_[scratch_eff_[t]]++] = static_cast<std::uint32_t>(t);
    std::fill(scratch_union_.begin(), scratch_union_.end(), 0);
    std::size_t packed = 0;
    for (std::uint32_t t : scratch_order_) {
      const std::uint64_t* s = set_words(f.unhit[t]);
      bool overlap = false;
      for (std::size_t k = 0; k < width_ && !overlap; ++k)
        overlap = (s[k] & ~f.forbidden[k] & scratch_union_[k]) != 0;
      if (overlap) continue;
      for (std::size_t k = 0; k < width_; ++k) scratch_union_[k] |= s[k] & ~f.forbidden[k];
      if (++packed > budget) return false;
    }
  }

  const std::uint64_t* s = set_words(f.unhit[best]);
  for (std::size_t k = 0; k < width_; ++k) {
    std::uint64_t w = s[k] & ~f.forbidden[k];
    while (w) {
      f.branch.push_back(static_cast<std::uint32_t>(k * 64 + static_cast<std::size_t>(std::countr_zero(w))));
      w &= w - 1;
    }
  }
  return true;
}

HittingSetEnumerator::Step HittingSetEnumerator::next(BudgetTracker& budget) {
  while (true) {
    if (top_ == 0) return Step::Exhausted;
    Frame& f = stack_[top_ - 1];
    if (f.state != State::Branching) {
      const bool reported = f.state == State::LeafReported;
      refresh(f);
      if (f.unhit.empty()) {
        if (reported) {
          --top_;
          continue;
        }
        f.state = State::LeafReported;
        to_index_set(f.chosen, current_);
        return Step::Found;
      }
      if (!plan(f)) {
        --top_;
        continue;
      }
      f.state = State::Branching;
      continue;
    }
    if (f.next >= f.branch.size()) {
      --top_;
      continue;
    }
    if (!budget.charge()) return Step::Interrupted;
    if (f.last) {
      refresh(f);
      const std::uint32_t cell = f.branch[f.next++];
      const std::uint64_t word = std::uint64_t{1} << (cell & 63);
      bool hits = true;
      for (std::size_t t = f.planned; t < f.unhit.size() && hits; ++t)
        hits = (set_words(f.unhit[t])[cell >> 6] & word) != 0;
      if (!hits) continue;
      to_index_set(f.chosen, current_);
      current_.insert(cell);
      return Step::Found;
    }
    const std::size_t j = f.next++;
    const std::uint32_t cell = f.branch[j];
    Frame& c = push();
    c.chosen = f.chosen;
    c.chosen[cell >> 6] |= std::uint64_t{1} << (cell & 63);
    c.forbidden = f.forbidden;
    for (std::size_t t = 0; t < j; ++t) c.forbidden[f.branch[t] >> 6] |= std::uint64_t{1} << (f.branch[t] & 63);
    c.unhit.clear();
    const std::uint64_t word = std::uint64_t{1} << (cell & 63);
    for (std::uint32_t i : f.unhit)
      if (!(set_words(i)[cell >> 6] & word)) c.unhit.push_back(i);
    c.known = f.known;
    c.depth = f.depth + 1;
    c.branch.clear();
    c.state = State::Fresh;
  }
}

namespace {

struct Reduced {
  std::vector<IndexSet> residual;
  IndexSet allowed;
  IndexSet forced_in;
  bool infeasible = false;
};

Reduced reduce(const HittingInstance& inst) {
  Reduced r;
  const std::size_t u = inst.universe;
  r.forced_in = inst.forced_in.universe() ? inst.forced_in : IndexSet(u);
  const IndexSet out = inst.forced_out.universe() ? inst.forced_out : IndexSet(u);
  if (r.forced_in.universe() != u || out.universe() != u)
    throw Error(ErrorCode::SizeMismatch, "forced cell universe mismatch");
  if (r.forced_in.intersects(out))
    throw Error(ErrorCode::InvalidArgument, "a cell is both forced in and forced out");
  r.allowed = IndexSet::full(u) - out - r.forced_in;
  for (const auto& s : inst.family) {
    if (s.universe() != u) throw Error(ErrorCode::SizeMismatch, "family member universe mismatch");
    if (s.intersects(r.forced_in)) continue;
    if (!s.intersects(r.allowed)) r.infeasible = true;
    r.residual.push_back(s);
  }
  return r;
}

std::size_t packing(const std::vector<IndexSet>& sets, const IndexSet& allowed) {
  std::vector<std::size_t> order(sets.size());
  std::vector<std::size_t> eff(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    order[i] = i;
    eff[i] = (sets[i] & allowed).count();
  }
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return eff[a] < eff[b]; });
  IndexSet used(allowed.universe());
  std::size_t p = 0;
  for (auto i : order) {
    const IndexSet e = sets[i] & allowed;
    if (e.empty() || e.intersects(used)) continue;
    used |= e;
    ++p;
  }
  return p;
}

// Drops allowed cells whose set memberships are a strict subset of another
// allowed cell's.
void drop_dominated(const std::vector<IndexSet>& sets, IndexSet& allowed) {
  const std::size_t u = allowed.universe();
  std::vector<IndexSet> member(u, IndexSet(sets.size()));
  for (std::size_t i = 0; i < sets.size(); ++i) sets[i].for_each([&](std::size_t c) { member[c].insert(i); });
  const auto cells = allowed.to_vector();
  IndexSet dropped(u);
  for (auto c : cells) {
    for (auto d : cells) {
      if (c == d || dropped.contains(d)) continue;
      if (member[c].is_subset_of(member[d]) && !(member[c] == member[d])) {
        dropped.insert(c);
        break;
      }
    }
  }
  allowed -= dropped;
}

IndexSet greedy_cover(const std::vector<IndexSet>& sets, const IndexSet& allowed) {
  const std::size_t u = allowed.universe();
  std::vector<IndexSet> member(u, IndexSet(sets.size()));
  for (std::size_t i = 0; i < sets.size(); ++i)
    (sets[i] & allowed).for_each([&](std::size_t c) { member[c].insert(i); });
  IndexSet open = IndexSet::full(sets.size());
  IndexSet chosen(u);
  while (!open.empty()) {
    std::size_t best = u;
    std::size_t best_gain = 0;
    allowed.for_each([&](std::size_t c) {
      const std::size_t gain = (member[c] & open).count();
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    });
    if (best == u) break;
    chosen.insert(best);
    open -= member[best];
  }
  return chosen;
}

}  // namespace

std::size_t disjoint_packing_bound(const HittingInstance& instance) {
  const Reduced r = reduce(instance);
  return r.forced_in.count() + packing(r.residual, r.allowed);
}

HittingSolution min_hitting_set(const HittingInstance& instance, std::optional<std::size_t> upper_hint,
                                const SearchBudget& budget) {
  Reduced r = reduce(instance);
  HittingSolution sol;
  sol.cells = IndexSet(instance.universe);
  if (r.infeasible) {
    sol.status = HittingStatus::Infeasible;
    return sol;
  }
  const std::size_t base = r.forced_in.count();
  drop_dominated(r.residual, r.allowed);
  const IndexSet greedy = greedy_cover(r.residual, r.allowed);
  const std::size_t greedy_size = greedy.count();
  const std::size_t lb = packing(r.residual, r.allowed);
  std::size_t cap = greedy_size;
  if (upper_hint) {
    if (*upper_hint < base) throw Error(ErrorCode::InvalidArgument, "upper hint below the forced cells");
    cap = std::min(cap, *upper_hint - base);
  }

  BudgetTracker tracker(budget);
  for (std::size_t k = lb; k <= cap; ++k) {
    HittingSetEnumerator e(instance.universe, r.residual, k, r.allowed);
    const auto step = e.next(tracker);
    if (step == HittingSetEnumerator::Step::Found) {
      sol.cells = e.current() | r.forced_in;
      sol.value = sol.cells.count();
      sol.lower_bound = sol.value;
      sol.proven_optimal = true;
      sol.status = HittingStatus::Optimal;
      sol.nodes = tracker.nodes();
      return sol;
    }
    if (step == HittingSetEnumerator::Step::Interrupted) {
      sol.cells = greedy | r.forced_in;
      sol.value = sol.cells.count();
      sol.lower_bound = base + k;
      sol.status = HittingStatus::Interrupted;
      sol.nodes = tracker.nodes();
      return sol;
    }
  }
  if (cap < greedy_size) throw Error(ErrorCode::InvalidArgument, "upper hint below the optimum");
  throw Error(ErrorCode::InternalConsistency, "greedy cover size not reached by exact search");
}

}  // namespace mscp
