#include "commands.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mscp/engine.hpp"
#include "mscp/error.hpp"
#include "mscp/model_export.hpp"
#include "mscp/solver.hpp"

namespace mscp::cli {

std::string_view results_header() {
  return "instance,command,config,status,lower,upper,seconds,iterations,nodes,certificate_size,puzzle";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

std::string opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string format_record(const RunRecord& r) {
  std::ostringstream o;
  o << csv_field(r.instance) << ',' << csv_field(r.command) << ',' << csv_field(r.config) << ','
    << csv_field(r.status) << ',' << opt(r.lower) << ',' << opt(r.upper) << ',' << std::fixed
    << std::setprecision(3) << r.seconds << ',' << r.iterations << ',' << r.nodes << ',' << r.certificate_size
    << ',' << csv_field(r.puzzle);
  return o.str();
}

void append_records(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to " + path.string());
  if (fresh) out << results_header() << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::array<std::string_view, 10> bucket_labels() {
  return {"<=1", "1-10", "10-30", "30-60", "60-300", "300-600", "600-1800", "1800-3600", "3600-7200", ">=7200"};
}

std::size_t bucket_of(double seconds) {
  for (std::size_t b = 0; b < kBucketEdges.size(); ++b)
    if (seconds <= kBucketEdges[b]) return b;
  return kBucketEdges.size();
}

std::array<std::size_t, 10> time_histogram(const UnavoidableCollection& c) {
  std::array<std::size_t, 10> h{};
  for (const auto& m : c.metadata()) ++h[bucket_of(m.generation_seconds)];
  return h;
}

void write_histogram(const std::array<std::size_t, 10>& h, std::ostream& out) {
  const auto labels = bucket_labels();
  out << "generation time [s]  # of unavoidable sets\n";
  for (std::size_t b = 0; b < h.size(); ++b)
    out << std::setw(19) << labels[b] << "  " << h[b] << '\n';
}

std::filesystem::path instance_path(const std::filesystem::path& base, std::size_t index, std::size_t total) {
  if (total <= 1) return base;
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + "_" + std::to_string(index) + base.extension().string());
  return p;
}

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> log;
  std::call_once(once, [] {
    log = spdlog::stderr_color_mt("mscp");
    log->set_pattern("[%T.%e] %^%l%$ %v");
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("MSCP_LOG")) level = spdlog::level::from_str(env);
    log->set_level(level);
  });
  return log;
}

struct Instance {
  std::string id;
  std::string text;
};

std::vector<Instance> read_instances(const std::string& path) {
  const auto records = read_records_file(path);
  const std::string base = std::filesystem::path(path).filename().string();
  std::vector<Instance> out;
  for (const auto& r : records) out.push_back({base + ":" + std::to_string(r.line), r.text});
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no grid in " + path);
  return out;
}

// Runs fn(i) for every instance on up to `jobs` threads; fn must only touch
// its own slot.
template <class Fn>
void for_each_instance(std::size_t count, unsigned jobs, Fn fn) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(3) << s;
  return o.str();
}

struct Common {
  std::string results;
};

struct GenunavOptions {
  std::string grid_file;
  std::size_t max_sets = 5000;
  std::optional<int> max_size;
  std::optional<double> max_time;
  std::string out;
  std::string progress_csv;
};

struct SolveOptions {
  std::string grid_file;
  std::size_t seed_cuts = 1000;
  std::string cuts_file;
  std::optional<double> budget;
  std::optional<std::uint64_t> node_budget;
  std::string trace_csv;
  std::string incumbent;
  unsigned jobs = 1;
};

struct VerifyOptions {
  std::string grid_file;
  std::string puzzle_file;
};

struct ExportOptions {
  std::string grid_file;
  std::string cuts_file;
  std::string out_dir = ".";
  std::string stem = "mscp";
};

void emit(const Common& c, std::span<const RunRecord> records) {
  if (!c.results.empty()) append_records(c.results, records);
}

int cmd_genunav(const GenunavOptions& o, const Common& common, std::ostream& out) {
  const auto instances = read_instances(o.grid_file);
  std::vector<RunRecord> records;
  int rc = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    RunRecord rec{inst.id, "genunav", "", "Error", {}, {}, 0.0, 0, 0, 0, ""};
    {
      std::ostringstream cfg;
      cfg << "max_sets=" << o.max_sets << ";max_size=" << (o.max_size ? std::to_string(*o.max_size) : "none")
          << ";max_time=" << (o.max_time ? fmt_seconds(*o.max_time) : "none");
      rec.config = cfg.str();
    }
    try {
      const Grid g = parse_grid(inst.text);
      GenerationLimits limits;
      limits.max_sets = o.max_sets;
      limits.max_size = o.max_size;
      if (o.max_time) limits.max_time = std::chrono::duration<double>(*o.max_time);
      std::ofstream progress;
      if (!o.progress_csv.empty()) {
        const auto p = instance_path(o.progress_csv, i + 1, instances.size());
        progress.open(p);
        if (!progress) throw Error(ErrorCode::IoError, "cannot write " + p.string());
        progress << "set_index,m,elapsed_seconds\n";
      }
      const ProgressSink sink = [&](const ProgressRow& r) {
        if (progress.is_open()) progress << r.set_index << ',' << r.m << ',' << r.elapsed_seconds << '\n';
        logger()->debug("{}: set {} (m={}) at {:.3f} s", inst.id, r.set_index, r.m, r.elapsed_seconds);
      };
      BudgetTracker clock;
      const auto coll = generate_all(g, limits, sink);
      rec.seconds = clock.elapsed_seconds();
      if (!o.out.empty()) save_collection(coll, instance_path(o.out, i + 1, instances.size()).string());
      rec.certificate_size = coll.size();
      rec.status = coll.interrupted() ? "Interrupted"
                   : coll.complete_through() >= static_cast<int>(g.size().cells()) ? "Complete"
                   : coll.size() >= o.max_sets                                      ? "MaxSets"
                                                                                    : "MaxSize";
      out << inst.id << ": " << coll.size() << " minimal unavoidable sets, complete through size "
          << coll.complete_through() << (coll.interrupted() ? ", interrupted" : "") << " ("
          << fmt_seconds(rec.seconds) << " s)\n";
      std::map<std::size_t, std::size_t> by_size;
      for (const auto& s : coll.sets()) ++by_size[s.size()];
      out << "sizes:";
      for (auto [k, v] : by_size) out << ' ' << k << 'x' << v;
      out << '\n';
      write_histogram(time_histogram(coll), out);
    } catch (const Error& e) {
      logger()->error("{}: {}", inst.id, e.what());
      out << inst.id << ": error: " << e.what() << '\n';
      rc = 1;
    }
    records.push_back(std::move(rec));
  }
  emit(common, records);
  return rc;
}

int cmd_solve(const SolveOptions& o, const Common& common, std::ostream& out) {
  const auto instances = read_instances(o.grid_file);
  std::vector<std::string> incumbents;
  if (!o.incumbent.empty()) {
    for (const auto& r : read_records_file(o.incumbent)) incumbents.push_back(r.text);
    if (incumbents.size() != instances.size())
      throw Error(ErrorCode::InvalidArgument, "incumbent file needs one puzzle per grid");
  }
  std::ostringstream cfg;
  cfg << "seed_cuts=" << o.seed_cuts << ";cuts_file=" << (o.cuts_file.empty() ? "none" : o.cuts_file)
      << ";budget=" << (o.budget ? fmt_seconds(*o.budget) : "none")
      << ";node_budget=" << (o.node_budget ? std::to_string(*o.node_budget) : "none")
      << ";incumbent=" << (o.incumbent.empty() ? "none" : "given");

  std::vector<RunRecord> records(instances.size());
  std::vector<std::string> lines(instances.size());
  std::vector<int> failed(instances.size(), 0);
  for_each_instance(instances.size(), o.jobs, [&](std::size_t i) {
    const auto& inst = instances[i];
    RunRecord& rec = records[i];
    rec = {inst.id, "solve", cfg.str(), "Error", {}, {}, 0.0, 0, 0, 0, ""};
    try {
      const Grid g = parse_grid(inst.text);
      MscpConfig config;
      config.initial_cuts = o.seed_cuts;
      config.solve_budget.max_time = o.budget ? std::optional(std::chrono::duration<double>(*o.budget))
                                              : std::nullopt;
      config.solve_budget.max_nodes = o.node_budget;
      if (!o.cuts_file.empty())
        config.seed_collection = load_collection(instance_path(o.cuts_file, i + 1, instances.size()).string(), g);
      if (!incumbents.empty()) {
        const Puzzle p = parse_puzzle(incumbents[i], g.size());
        config.initial_incumbent = CluePattern::of_puzzle(p);
      }
      auto log = logger();
      config.log = [log, id = inst.id](std::string_view s) { log->info("{}: {}", id, s); };
      const MscpResult r = solve_mscp(g, config);
      if (!o.trace_csv.empty()) {
        const auto p = instance_path(o.trace_csv, i + 1, instances.size());
        std::ofstream t(p);
        if (!t) throw Error(ErrorCode::IoError, "cannot write " + p.string());
        write_trace_csv(r.trace, t);
      }
      rec.status = std::string(to_string(r.status));
      rec.lower = r.lower_bound;
      rec.upper = r.upper_bound;
      rec.seconds = r.seconds;
      rec.iterations = r.iterations;
      rec.nodes = r.hitting_nodes;
      rec.certificate_size = r.certificate.size();
      rec.puzzle = serialize(apply_pattern(g, r.best_pattern));
      std::ostringstream line;
      if (r.status == MscpStatus::Optimal)
        line << inst.id << ": Optimal " << r.upper_bound;
      else
        line << inst.id << ": " << to_string(r.status) << " lower=" << r.lower_bound << " upper=" << r.upper_bound;
      line << " (" << fmt_seconds(r.seconds) << " s, " << r.iterations << " iterations, " << r.certificate.size()
           << " sets)\n"
           << rec.puzzle << '\n';
      lines[i] = line.str();
    } catch (const Error& e) {
      logger()->error("{}: {}", inst.id, e.what());
      lines[i] = inst.id + ": error: " + e.what() + "\n";
      failed[i] = 1;
    }
  });
  for (const auto& l : lines) out << l;
  emit(common, records);
  for (int f : failed)
    if (f) return 1;
  return 0;
}

int cmd_verify(const VerifyOptions& o, const Common& common, std::ostream& out) {
  const auto grids = read_instances(o.grid_file);
  const auto puzzles = read_instances(o.puzzle_file);
  const Grid g = parse_grid(grids.front().text);
  RunRecord rec{grids.front().id, "verify", "puzzle=" + puzzles.front().id, "", {}, {}, 0.0, 0, 0, 0, ""};
  BudgetTracker clock;
  std::string verdict;
  try {
    const Puzzle p = parse_puzzle(puzzles.front().text, g.size());
    rec.puzzle = serialize(p);
    bool agrees = true;
    for (std::size_t c = 0; c < g.size().cells(); ++c)
      if (p.at(c) != 0 && p.at(c) != g.at(c)) agrees = false;
    if (!agrees) {
      verdict = "MISMATCH";
    } else {
      const auto count = count_solutions(p, 2);
      rec.nodes = count.nodes;
      verdict = count.count == 1 ? "VALID" : "INVALID(multiple)";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConstraintViolation) throw;
    verdict = "MISMATCH";
  }
  rec.status = verdict;
  rec.seconds = clock.elapsed_seconds();
  out << verdict << '\n';
  emit(common, std::span<const RunRecord>(&rec, 1));
  return verdict == "VALID" ? 0 : 1;
}

int cmd_export(const ExportOptions& o, const Common& common, std::ostream& out) {
  const auto grids = read_instances(o.grid_file);
  const Grid g = parse_grid(grids.front().text);
  std::optional<UnavoidableCollection> cuts;
  if (!o.cuts_file.empty()) cuts = load_collection(o.cuts_file, g);
  BudgetTracker clock;
  const auto files = export_bilevel(g, cuts ? &*cuts : nullptr, o.out_dir, o.stem);
  out << "model " << files.model_path.string() << '\n' << "aux " << files.aux_path.string() << '\n';
  if (files.cuts_path) out << "cuts " << files.cuts_path->string() << '\n';
  out << "variables " << files.variables << '\n' << "constraints " << files.rows << '\n';
  RunRecord rec{grids.front().id, "export", "cuts_file=" + (o.cuts_file.empty() ? std::string("none") : o.cuts_file),
                "Written", {}, {}, clock.elapsed_seconds(), 0, 0, cuts ? cuts->size() : 0, ""};
  emit(common, std::span<const RunRecord>(&rec, 1));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum Sudoku clue solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--results", common.results, "Append one CSV record per instance to this file");

  GenunavOptions gen;
  auto* g = app.add_subcommand("genunav", "Generate minimal unavoidable sets");
  g->add_option("grid_file", gen.grid_file, "Grids, one per line")->required()->check(CLI::ExistingFile);
  g->add_option("--max-sets", gen.max_sets, "Stop after this many sets")->check(CLI::PositiveNumber);
  g->add_option("--max-size", gen.max_size, "Largest set size to search")->check(CLI::PositiveNumber);
  g->add_option("--max-time", gen.max_time, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  g->add_option("--out", gen.out, "Collection file");
  g->add_option("--progress-csv", gen.progress_csv, "Per-set progress CSV");

  SolveOptions sol;
  auto* s = app.add_subcommand("solve", "Find the minimum number of clues");
  s->add_option("grid_file", sol.grid_file, "Grids, one per line")->required()->check(CLI::ExistingFile);
  s->add_option("--seed-cuts", sol.seed_cuts, "Unavoidable sets to seed the certificate with");
  s->add_option("--cuts-file", sol.cuts_file, "Seed collection instead of generating")->check(CLI::ExistingFile);
  s->add_option("--budget", sol.budget, "Time budget in seconds")->check(CLI::NonNegativeNumber);
  s->add_option("--node-budget", sol.node_budget, "Hitting-set node budget");
  s->add_option("--trace-csv", sol.trace_csv, "Bound trace CSV");
  s->add_option("--incumbent", sol.incumbent, "Known valid puzzles, one per grid")->check(CLI::ExistingFile);
  s->add_option("--jobs", sol.jobs, "Instances solved in parallel")->check(CLI::PositiveNumber);

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Check that a puzzle has the grid as its unique solution");
  v->add_option("grid_file", ver.grid_file)->required()->check(CLI::ExistingFile);
  v->add_option("puzzle_file", ver.puzzle_file)->required()->check(CLI::ExistingFile);

  ExportOptions ex;
  auto* e = app.add_subcommand("export", "Write the bilevel model as LP + annotation files");
  e->add_option("grid_file", ex.grid_file)->required()->check(CLI::ExistingFile);
  e->add_option("--cuts-file", ex.cuts_file, "Collection to export as cut rows")->check(CLI::ExistingFile);
  e->add_option("--out-dir", ex.out_dir, "Output directory");
  e->add_option("--stem", ex.stem, "File name stem");

  std::vector<const char*> argv{"mscp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_genunav(gen, common, out);
    if (*s) return cmd_solve(sol, common, out);
    if (*v) return cmd_verify(ver, common, out);
    if (*e) return cmd_export(ex, common, out);
  } catch (const Error& x) {
    err << "error: " << x.what() << '\n';
    return 1;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace mscp::cli
