#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace mscp {

// Limits for a search. An exhausted budget yields an Interrupted outcome,
// never a wrong answer.
struct SearchBudget {
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::duration<double>> max_time;

  static SearchBudget unlimited() { return {}; }
  static SearchBudget seconds(double s) {
    return {std::nullopt, std::chrono::duration<double>(s)};
  }
  static SearchBudget nodes(std::uint64_t n) { return {n, std::nullopt}; }
};

// Node and wall-clock accounting against a SearchBudget. Time is sampled
// every 1024 charged nodes.
class BudgetTracker {
 public:
  using Clock = std::chrono::steady_clock;

  explicit BudgetTracker(const SearchBudget& budget = {})
      : budget_(budget), start_(Clock::now()) {}

  // Accounts one node; false once the budget is exhausted (and thereafter).
  bool charge() {
    if (exhausted_) return false;
    ++nodes_;
    if (budget_.max_nodes && nodes_ > *budget_.max_nodes) exhausted_ = true;
    if (budget_.max_time && (nodes_ & 1023) == 0 && elapsed() > *budget_.max_time)
      exhausted_ = true;
    return !exhausted_;
  }

  // Immediate time check, for callers between node-heavy phases.
  bool expired() {
    if (!exhausted_ && budget_.max_time && elapsed() > *budget_.max_time) exhausted_ = true;
    return exhausted_;
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }
  std::chrono::duration<double> elapsed() const { return Clock::now() - start_; }
  double elapsed_seconds() const { return elapsed().count(); }
  const SearchBudget& budget() const { return budget_; }

 private:
  SearchBudget budget_;
  Clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace mscp
