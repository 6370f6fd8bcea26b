#include <benchmark/benchmark.h>

#include <sstream>

#include "mscp/engine.hpp"
#include "mscp/hitting_set.hpp"
#include "mscp/model_export.hpp"
#include "mscp/solver.hpp"
#include "mscp/unavoidable.hpp"

using namespace mscp;

namespace {

constexpr const char* kPuzzle =
    "...64.2..1.8....3............7.18....6....5...........3......1.4..2......2.5.....";
constexpr const char* kGrid =
    "793645281158792436642183795537418629961327548284956173375864912416239857829571364";

const Grid& grid() {
  static const Grid g = parse_grid(kGrid);
  return g;
}

const UnavoidableCollection& seeds() {
  static const UnavoidableCollection c = [] {
    GenerationLimits lim;
    lim.max_sets = 1000;
    return generate_all(grid(), lim);
  }();
  return c;
}

void BM_SolvePuzzle(benchmark::State& st) {
  const Puzzle p = parse_puzzle(kPuzzle);
  for (auto _ : st) benchmark::DoNotOptimize(solve_puzzle(p));
}
BENCHMARK(BM_SolvePuzzle)->Unit(benchmark::kMicrosecond);

void BM_VerifyValidity(benchmark::State& st) {
  const auto pattern = CluePattern::of_puzzle(parse_puzzle(kPuzzle));
  for (auto _ : st) benchmark::DoNotOptimize(verify_validity(grid(), pattern));
}
BENCHMARK(BM_VerifyValidity)->Unit(benchmark::kMicrosecond);

void BM_CountEmpty4x4(benchmark::State& st) {
  const Puzzle p = Puzzle::empty(GridSize::from_side(4));
  for (auto _ : st) benchmark::DoNotOptimize(count_solutions(p, 1000));
}
BENCHMARK(BM_CountEmpty4x4)->Unit(benchmark::kMicrosecond);

void BM_GenerateUpTo(benchmark::State& st) {
  GenerationLimits lim;
  lim.max_size = static_cast<int>(st.range(0));
  std::size_t n = 0;
  for (auto _ : st) n = generate_all(grid(), lim).size();
  st.counters["sets"] = static_cast<double>(n);
}
BENCHMARK(BM_GenerateUpTo)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GenerateFirstSets(benchmark::State& st) {
  GenerationLimits lim;
  lim.max_sets = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(generate_all(grid(), lim));
}
BENCHMARK(BM_GenerateFirstSets)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

// One full pass of the size-bounded enumerator over the first 1000 sets.
void BM_EnumeratorPass(benchmark::State& st) {
  const auto fam = seeds().families();
  std::uint64_t nodes = 0;
  for (auto _ : st) {
    HittingSetEnumerator e(81, fam, static_cast<std::size_t>(st.range(0)));
    BudgetTracker t;
    while (e.next(t) == HittingSetEnumerator::Step::Found) {
    }
    nodes = t.nodes();
  }
  st.counters["nodes"] = static_cast<double>(nodes);
  st.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes) * static_cast<double>(st.iterations()),
                                              benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EnumeratorPass)->Arg(11)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MinHittingSet(benchmark::State& st) {
  HittingInstance inst{81, seeds().prefix(static_cast<std::size_t>(st.range(0))).families(), {}, {}};
  for (auto _ : st) benchmark::DoNotOptimize(min_hitting_set(inst));
}
BENCHMARK(BM_MinHittingSet)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_WriteReadLp(benchmark::State& st) {
  const auto sys = bilevel_system(grid(), &seeds());
  for (auto _ : st) {
    std::stringstream io;
    write_lp(sys, io);
    benchmark::DoNotOptimize(read_lp(io));
  }
}
BENCHMARK(BM_WriteReadLp)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
