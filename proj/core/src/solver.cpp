#include "mscp/solver.hpp"

#include <cassert>
#include <ostream>
#include <string>

#include "mscp/engine.hpp"
#include "mscp/error.hpp"
#include "mscp/hitting_set.hpp"

namespace mscp {

std::string_view to_string(MscpStatus status) {
  switch (status) {
    case MscpStatus::Optimal: return "Optimal";
    case MscpStatus::BoundsOnly: return "BoundsOnly";
    case MscpStatus::Interrupted: return "Interrupted";
  }
  return "?";
}

bool verify_validity(const Grid& g, const CluePattern& pattern, const SearchBudget& budget) {
  if (!(g.size() == pattern.size())) throw Error(ErrorCode::SizeMismatch, "pattern and grid sizes differ");
  const auto r = count_solutions(apply_pattern(g, pattern), 2, budget);
  if (r.interrupted) throw Error(ErrorCode::Interrupted, "uniqueness check budget exhausted");
  return r.count == 1;
}

void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out) {
  out << "iteration,lower,upper,certificate_size,elapsed_seconds\n";
  for (const auto& t : trace) {
    out << t.iteration << ',' << t.lower << ',';
    if (t.upper) out << *t.upper;
    out << ',' << t.certificate_size << ',' << t.elapsed_seconds << '\n';
  }
}

namespace {

struct LoopProblem {
  std::size_t universe = 0;
  // Indices where some alternate consistent with `clue` differs from the
  // target; nullopt when the clue pins the target down.
  std::function<std::optional<IndexSet>(const IndexSet& clue)> alternate_diff;
};

struct CutTiming {
  double seconds = 0.0;
  double elapsed = 0.0;
};

struct LoopOutput {
  MscpStatus status = MscpStatus::Interrupted;
  IndexSet best;
  std::size_t upper = 0;
  std::size_t lower = 0;
  std::size_t iterations = 0;
  std::uint64_t nodes = 0;
  std::vector<TracePoint> trace;
  std::vector<CutTiming> timings;
};

std::optional<IndexSet> alternate_within(const LoopProblem& p, const IndexSet& cells) {
  return p.alternate_diff(cells.complement());
}

IndexSet minimal_diff(const LoopProblem& p, IndexSet current) {
  for (std::size_t c = 0; c < current.universe(); ++c) {
    if (!current.contains(c)) continue;
    IndexSet trial = current;
    trial.erase(c);
    if (auto d = alternate_within(p, trial)) current = std::move(*d);
  }
  return current;
}

[[maybe_unused]] bool is_minimal(const LoopProblem& p, const IndexSet& cells) {
  if (!alternate_within(p, cells)) return false;
  for (auto c : cells.to_vector()) {
    IndexSet trial = cells;
    trial.erase(c);
    if (alternate_within(p, trial)) return false;
  }
  return true;
}

// Grows h by the first cell of each alternate's difference until unique,
// then drops cells that are not needed, in ascending order.
IndexSet repair(const LoopProblem& p, IndexSet h) {
  while (auto d = p.alternate_diff(h)) h.insert(d->first());
  for (auto c : h.to_vector()) {
    IndexSet trial = h;
    trial.erase(c);
    if (!p.alternate_diff(trial)) h = std::move(trial);
  }
  return h;
}

void say(const LogSink& log, const std::string& line) {
  if (log) log(line);
}

LoopOutput run_loop(const LoopProblem& p, std::vector<IndexSet>& cuts,
                    const std::optional<IndexSet>& incumbent, BudgetTracker& tracker, const LogSink& log) {
  LoopOutput out;
  out.best = incumbent ? *incumbent : IndexSet::full(p.universe);
  std::optional<std::size_t> upper;
  if (incumbent) upper = incumbent->count();

  std::size_t k = disjoint_packing_bound({p.universe, cuts, {}, {}});
  const auto point = [&] {
    out.trace.push_back({out.iterations, k, upper, cuts.size(), tracker.elapsed_seconds()});
  };
  const auto finish = [&](MscpStatus status) {
    out.status = status;
    out.lower = k;
    out.upper = upper.value_or(p.universe);
    out.nodes = tracker.nodes();
    return out;
  };
  point();
  say(log, "loop start: " + std::to_string(cuts.size()) + " cuts, lower bound " + std::to_string(k));

  std::optional<IndexSet> last;
  bool stopped = false;
  while (!stopped) {
    if (upper && k >= *upper) {
      k = *upper;
      return finish(MscpStatus::Optimal);
    }
    HittingSetEnumerator e(p.universe, cuts, k);
    bool exhausted = false;
    while (!stopped) {
      const auto step = e.next(tracker);
      if (step == HittingSetEnumerator::Step::Interrupted) {
        stopped = true;
        break;
      }
      if (step == HittingSetEnumerator::Step::Exhausted) {
        exhausted = true;
        break;
      }
      const IndexSet h = e.current();
      ++out.iterations;
      assert(h.count() == k);
      last = h;
      const double t0 = tracker.elapsed_seconds();
      auto d = p.alternate_diff(h);
      if (!d) {
        out.best = h;
        upper = h.count();
        point();
        say(log, "optimal: " + std::to_string(h.count()) + " clues after " +
                     std::to_string(out.iterations) + " iterations");
        return finish(MscpStatus::Optimal);
      }
      IndexSet cut = minimal_diff(p, std::move(*d));
      assert(is_minimal(p, cut));
      if (cut.intersects(h))
        throw Error(ErrorCode::InternalConsistency, "new cut is hit by the current hitting set");
      for (const auto& c : cuts)
        if (c.is_subset_of(cut) || cut.is_subset_of(c))
          throw Error(ErrorCode::InternalConsistency, "new cut is implied by the certificate");
      cuts.push_back(cut);
      const double t1 = tracker.elapsed_seconds();
      out.timings.push_back({t1 - t0, t1});
      e.add_set(cut);
      point();
      if (out.iterations % 500 == 0)
        say(log, "iteration " + std::to_string(out.iterations) + ": lower " + std::to_string(k) + ", " +
                     std::to_string(cuts.size()) + " cuts");
      if (tracker.expired()) stopped = true;
    }
    if (exhausted) {
      ++k;
      point();
      say(log, "lower bound " + std::to_string(k) + " (" + std::to_string(cuts.size()) + " cuts, " +
                   std::to_string(tracker.elapsed_seconds()) + " s)");
    }
  }

  IndexSet rep = repair(p, last.value_or(IndexSet(p.universe)));
  if (!upper || rep.count() < *upper) {
    upper = rep.count();
    out.best = std::move(rep);
  }
  point();
  say(log, "budget exhausted: bounds [" + std::to_string(k) + ", " + std::to_string(*upper) + "]");
  return finish(*upper <= k ? MscpStatus::Optimal : MscpStatus::BoundsOnly);
}

LoopProblem sudoku_problem(const Grid& g) {
  return {g.size().cells(), [&g](const IndexSet& clue) -> std::optional<IndexSet> {
            auto alt = find_alternate(g, CluePattern(g.size(), clue));
            if (!alt.value) return std::nullopt;
            return diff_cells(g, *alt.value).cells();
          }};
}

IndexSet diff_of(const Certificate& a, const Certificate& b) {
  IndexSet d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.insert(i);
  return d;
}

}  // namespace

MscpResult solve_mscp(const Grid& g, const MscpConfig& config) {
  BudgetTracker tracker(config.solve_budget);
  MscpResult result{.best_pattern = CluePattern(g.size()), .certificate = UnavoidableCollection(g), .trace = {}};

  if (config.seed_collection) {
    if (config.seed_collection->fingerprint() != fingerprint(g))
      throw Error(ErrorCode::FingerprintMismatch, "seed collection belongs to another grid");
    result.certificate = config.seed_collection->prefix(config.initial_cuts);
  } else if (config.initial_cuts > 0) {
    GenerationLimits limits = config.generation_limits;
    limits.max_sets = config.initial_cuts;
    result.certificate = generate_all(g, limits);
  }
  result.seed_count = result.certificate.size();
  say(config.log, "seeded " + std::to_string(result.seed_count) + " unavoidable sets in " +
                      std::to_string(tracker.elapsed_seconds()) + " s");

  std::optional<IndexSet> incumbent;
  if (config.initial_incumbent) {
    if (!verify_validity(g, *config.initial_incumbent))
      throw Error(ErrorCode::InvalidArgument, "initial incumbent is not a valid pattern");
    incumbent = config.initial_incumbent->mask();
  }

  std::vector<IndexSet> cuts = result.certificate.families();
  const LoopProblem p = sudoku_problem(g);
  LoopOutput out;
  try {
    out = run_loop(p, cuts, incumbent, tracker, config.log);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Interrupted) throw;
    out.status = MscpStatus::Interrupted;
    out.best = incumbent.value_or(IndexSet::full(p.universe));
    out.upper = out.best.count();
  }

  for (std::size_t i = result.certificate.size(); i < cuts.size(); ++i) {
    const CutTiming t = out.timings[i - result.seed_count];
    result.certificate.insert(UnavoidableSet(g.size(), cuts[i]),
                              {result.certificate.size() + 1, t.seconds, t.elapsed,
                               static_cast<int>(cuts[i].count())});
  }
  result.status = out.status;
  result.best_pattern = CluePattern(g.size(), out.best);
  result.upper_bound = out.upper;
  result.lower_bound = out.lower;
  result.iterations = out.iterations;
  result.hitting_nodes = out.nodes;
  result.trace = std::move(out.trace);
  result.seconds = tracker.elapsed_seconds();
  return result;
}

FcpResult fcp_solve(const FcpInstance& instance, const MscpConfig& config) {
  const std::size_t l = instance.certificate_length;
  if (instance.target_certificate.size() != l)
    throw Error(ErrorCode::SizeMismatch, "target certificate length differs from certificate_length");
  if (!instance.alternate_finder) throw Error(ErrorCode::InvalidArgument, "alternate_finder missing");
  if (instance.alternate_finder(IndexSet::full(l)))
    throw Error(ErrorCode::InvalidArgument, "target certificate is not pinned by the full clue");

  BudgetTracker tracker(config.solve_budget);
  const LoopProblem p{l, [&](const IndexSet& clue) -> std::optional<IndexSet> {
                        auto alt = instance.alternate_finder(clue);
                        if (!alt) return std::nullopt;
                        if (alt->size() != l)
                          throw Error(ErrorCode::SizeMismatch, "alternate certificate has the wrong length");
                        IndexSet d = diff_of(instance.target_certificate, *alt);
                        if (d.empty() || d.intersects(clue))
                          throw Error(ErrorCode::InternalConsistency, "alternate_finder broke the clue contract");
                        return d;
                      }};

  FcpResult result;
  std::vector<IndexSet> cuts;
  if (instance.deviation_finder && config.initial_cuts > 0) {
    BudgetTracker gen({std::nullopt, config.generation_limits.max_time});
    const int top = static_cast<int>(config.generation_limits.max_size
                                         ? std::min<std::size_t>(*config.generation_limits.max_size, l)
                                         : l);
    for (int m = 1; m <= top && cuts.size() < config.initial_cuts && !gen.expired(); ++m) {
      while (cuts.size() < config.initial_cuts) {
        auto c = instance.deviation_finder(m, cuts);
        if (!c) break;
        cuts.push_back(diff_of(instance.target_certificate, *c));
      }
    }
  }
  result.seed_count = cuts.size();

  LoopOutput out;
  try {
    out = run_loop(p, cuts, std::nullopt, tracker, config.log);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Interrupted) throw;
    out.status = MscpStatus::Interrupted;
    out.best = IndexSet::full(l);
    out.upper = l;
  }
  result.status = out.status;
  result.best_clue = std::move(out.best);
  result.upper_bound = out.upper;
  result.lower_bound = out.lower;
  result.certificate = std::move(cuts);
  result.iterations = out.iterations;
  result.trace = std::move(out.trace);
  return result;
}

FcpInstance sudoku_fcp(const Grid& g) {
  FcpInstance inst;
  inst.certificate_length = g.size().cells();
  inst.target_certificate.assign(g.entries().begin(), g.entries().end());
  const Layout layout{g.side(), g.size().box()};
  const auto target = g.entries();
  inst.alternate_finder = [layout, target](const IndexSet& clue) -> std::optional<Certificate> {
    auto r = engine::find_alternate(layout, target, clue);
    if (!r.value) return std::nullopt;
    return Certificate(r.value->begin(), r.value->end());
  };
  inst.deviation_finder = [layout, target](int m, std::span<const IndexSet> nogoods) -> std::optional<Certificate> {
    auto r = engine::find_deviating(layout, target, m, nogoods);
    if (!r.value) return std::nullopt;
    return Certificate(r.value->begin(), r.value->end());
  };
  return inst;
}

}  // namespace mscp
