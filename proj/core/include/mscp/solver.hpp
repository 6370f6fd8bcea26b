#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mscp/budget.hpp"
#include "mscp/grid.hpp"
#include "mscp/index_set.hpp"
#include "mscp/unavoidable.hpp"

namespace mscp {

using LogSink = std::function<void(std::string_view)>;

struct MscpConfig {
  std::size_t initial_cuts = 1000;
  GenerationLimits generation_limits{};
  SearchBudget solve_budget{};
  LogSink log;
  // Must be valid; checked before use. Gives the loop an upper bound to stop at.
  std::optional<CluePattern> initial_incumbent;
  // Used instead of running generate_all; its first initial_cuts sets seed the loop.
  std::optional<UnavoidableCollection> seed_collection;
};

enum class MscpStatus { Optimal, BoundsOnly, Interrupted };
std::string_view to_string(MscpStatus status);

struct TracePoint {
  std::size_t iteration = 0;
  std::size_t lower = 0;
  std::optional<std::size_t> upper;
  std::size_t certificate_size = 0;
  double elapsed_seconds = 0.0;
};

struct MscpResult {
  MscpStatus status = MscpStatus::Interrupted;
  CluePattern best_pattern;
  std::size_t upper_bound = 0;
  std::size_t lower_bound = 0;
  UnavoidableCollection certificate;
  std::size_t seed_count = 0;
  std::size_t iterations = 0;
  std::uint64_t hitting_nodes = 0;
  double seconds = 0.0;
  std::vector<TracePoint> trace;
};

// True iff apply_pattern(g, pattern) has exactly one completion.
bool verify_validity(const Grid& g, const CluePattern& pattern, const SearchBudget& budget = {});

// Smallest valid clue pattern for g. Hitting sets of the certificate are
// enumerated in size order; a hitting set without an alternate grid is
// optimal, otherwise the alternate's minimalized difference joins the
// certificate and the search continues.
MscpResult solve_mscp(const Grid& g, const MscpConfig& config = {});

// Trace as CSV: iteration,lower,upper,certificate_size,elapsed_seconds
void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out);

// Fewest-clue problem over an abstract certificate c* of length l. A clue is
// a set of indices whose values are revealed from c*.
using Certificate = std::vector<std::uint32_t>;

struct FcpInstance {
  std::size_t certificate_length = 0;
  Certificate target_certificate;
  // Certificate agreeing with c* on the clue indices and differing elsewhere.
  std::function<std::optional<Certificate>(const IndexSet& clue)> alternate_finder;
  // Certificate differing from c* in exactly m indices and agreeing with it
  // somewhere on every nogood. Used only for seeding.
  std::function<std::optional<Certificate>(int m, std::span<const IndexSet> nogoods)>
      deviation_finder;
};

struct FcpResult {
  MscpStatus status = MscpStatus::Interrupted;
  IndexSet best_clue;
  std::size_t upper_bound = 0;
  std::size_t lower_bound = 0;
  std::vector<IndexSet> certificate;
  std::size_t seed_count = 0;
  std::size_t iterations = 0;
  std::vector<TracePoint> trace;
};

// Throws Error(InvalidArgument) if c* itself has an alternate under the full clue.
FcpResult fcp_solve(const FcpInstance& instance, const MscpConfig& config = {});

// Sudoku as an FCP: one index per cell, symbol = digit.
FcpInstance sudoku_fcp(const Grid& g);

}  // namespace mscp
