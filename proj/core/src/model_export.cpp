#include "mscp/model_export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mscp/engine.hpp"
#include "mscp/error.hpp"

namespace mscp {

namespace {

int width_of(int n) { return static_cast<int>(std::to_string(n).size()); }

std::string pad(int v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::string row_name(const char* prefix, int n, std::initializer_list<int> idx) {
  std::string s = prefix;
  for (int v : idx) {
    s.push_back('_');
    s += pad(v, width_of(n));
  }
  return s;
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptFile, what); }

std::optional<long> to_long(std::string_view s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_follower_row(const std::string& name) {
  return name.starts_with("G0_") || name.starts_with("G1_") || name.starts_with("G2_") ||
         name.starts_with("G3_") || name.starts_with("F1_") || name == "N1";
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

// Writes tokens, wrapping before column 80 with a one-space indent.
class Wrapper {
 public:
  explicit Wrapper(std::ostream& out) : out_(out) {}
  void token(const std::string& t) {
    if (col_ > 0 && col_ + 1 + t.size() > 79) {
      out_ << "\n ";
      col_ = 1;
    }
    out_ << ' ' << t;
    col_ += 1 + t.size();
  }
  void end_line() {
    out_ << '\n';
    col_ = 0;
  }

 private:
  std::ostream& out_;
  std::size_t col_ = 0;
};

void write_terms(Wrapper& w, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef < 0) w.token("-");
    else if (!first) w.token("+");
    const long a = t.coef < 0 ? -t.coef : t.coef;
    if (a != 1) w.token(std::to_string(a));
    w.token(t.var);
    first = false;
  }
}

void write_row(std::ostream& out, const Row& r) {
  Wrapper w(out);
  w.token(r.name + ":");
  write_terms(w, r.terms);
  w.token(sense_text(r.sense));
  w.token(std::to_string(r.rhs));
  w.end_line();
}

// Shared term/row scanner for the LP body and the cuts file.
struct RowScanner {
  std::vector<Row> rows;
  Row current;
  bool open = false;
  long sign = 1;
  std::optional<long> coef;
  bool want_rhs = false;

  void feed(const std::string& tok) {
    if (want_rhs) {
      auto v = to_long(tok);
      if (!v) corrupt("bad right-hand side '" + tok + "'");
      current.rhs = *v;
      rows.push_back(std::move(current));
      current = Row{};
      open = false;
      want_rhs = false;
      return;
    }
    if (tok.size() > 1 && tok.back() == ':') {
      if (open) corrupt("row " + current.name + " has no sense");
      current = Row{};
      current.name = tok.substr(0, tok.size() - 1);
      open = true;
      return;
    }
    if (!open) corrupt("term outside a row: '" + tok + "'");
    if (tok == "<=" || tok == "=<" || tok == ">=" || tok == "=>" || tok == "=") {
      current.sense = tok == "=" ? Sense::Equal : (tok[0] == '<' || tok[1] == '<') ? Sense::LessEqual
                                                                                    : Sense::GreaterEqual;
      want_rhs = true;
      return;
    }
    term(tok, current.terms);
  }

  void term(const std::string& tok, std::vector<Term>& terms) {
    if (tok == "+") return;
    if (tok == "-") {
      sign = -sign;
      return;
    }
    if (auto v = to_long(tok)) {
      coef = *v;
      return;
    }
    terms.push_back({sign * coef.value_or(1), tok});
    sign = 1;
    coef.reset();
  }

  void finish() {
    if (open || want_rhs) corrupt("unterminated row " + current.name);
  }
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string x_name(int n, int i, int j, int k) { return row_name("x", n, {i, j, k}); }
std::string y_name(int n, int i, int j) { return row_name("y", n, {i, j}); }

std::optional<VarRef> parse_variable(std::string_view name) {
  if (name == "z") return VarRef{VarRef::Kind::Z};
  if (name.size() < 3 || (name[0] != 'x' && name[0] != 'y') || name[1] != '_') return std::nullopt;
  std::vector<int> idx;
  std::size_t pos = 2;
  while (pos <= name.size()) {
    auto next = name.find('_', pos);
    if (next == std::string_view::npos) next = name.size();
    auto v = to_long(name.substr(pos, next - pos));
    if (!v || *v < 1) return std::nullopt;
    idx.push_back(static_cast<int>(*v));
    pos = next + 1;
  }
  if (name[0] == 'x' && idx.size() == 3) return VarRef{VarRef::Kind::X, idx[0], idx[1], idx[2]};
  if (name[0] == 'y' && idx.size() == 2) return VarRef{VarRef::Kind::Y, idx[0], idx[1], 0};
  return std::nullopt;
}

std::vector<Row> cut_rows(const UnavoidableCollection& cuts) {
  const int n = cuts.grid_size().side();
  std::vector<Row> rows;
  for (std::size_t t = 0; t < cuts.size(); ++t) {
    Row r{"U_" + std::to_string(t + 1), {}, Sense::GreaterEqual, 1};
    for (const auto& c : cuts[t].sorted_cells()) r.terms.push_back({1, y_name(n, c.row, c.col)});
    rows.push_back(std::move(r));
  }
  return rows;
}

ConstraintSystem bilevel_system(const Grid& g, const UnavoidableCollection* cuts) {
  if (cuts && cuts->fingerprint() != fingerprint(g))
    throw Error(ErrorCode::FingerprintMismatch, "cuts belong to another grid");
  const int n = g.side();
  const int s = g.size().box();
  ConstraintSystem sys;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) sys.objective.push_back({1, y_name(n, i, j)});

  const auto add = [&](std::string name, std::vector<Term> terms, Sense sense, long rhs) {
    sys.rows.push_back({std::move(name), std::move(terms), sense, rhs});
  };
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      std::vector<Term> t;
      for (int k = 1; k <= n; ++k) t.push_back({1, x_name(n, i, j, k)});
      add(row_name("G0", n, {i, j}), std::move(t), Sense::Equal, 1);
    }
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) {
      std::vector<Term> t;
      for (int j = 1; j <= n; ++j) t.push_back({1, x_name(n, i, j, k)});
      add(row_name("G1", n, {i, k}), std::move(t), Sense::Equal, 1);
    }
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      std::vector<Term> t;
      for (int i = 1; i <= n; ++i) t.push_back({1, x_name(n, i, j, k)});
      add(row_name("G2", n, {j, k}), std::move(t), Sense::Equal, 1);
    }
  for (int p = 1; p <= s; ++p)
    for (int q = 1; q <= s; ++q)
      for (int k = 1; k <= n; ++k) {
        std::vector<Term> t;
        for (int i = s * p - s + 1; i <= s * p; ++i)
          for (int j = s * q - s + 1; j <= s * q; ++j) t.push_back({1, x_name(n, i, j, k)});
        add(row_name("G3", n, {p, q, k}), std::move(t), Sense::Equal, 1);
      }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      add(row_name("F1", n, {i, j}), {{1, x_name(n, i, j, g.at(Cell{i, j}))}, {-1, y_name(n, i, j)}},
          Sense::GreaterEqual, 0);
  {
    std::vector<Term> t;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) t.push_back({1, x_name(n, i, j, g.at(Cell{i, j}))});
    t.push_back({-1, "z"});
    add("N1", std::move(t), Sense::LessEqual, static_cast<long>(n) * n - 1);
  }
  add("V1", {{1, "z"}}, Sense::Equal, 1);
  if (cuts)
    for (auto& r : cut_rows(*cuts)) sys.rows.push_back(std::move(r));

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) sys.binaries.push_back(x_name(n, i, j, k));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) sys.binaries.push_back(y_name(n, i, j));
  sys.binaries.push_back("z");
  return sys;
}

void write_lp(const ConstraintSystem& sys, std::ostream& out) {
  out << "\\ minimum clue model, leader part; follower annotated in the .aux file\n";
  out << (sys.minimize ? "Minimize\n" : "Maximize\n");
  {
    Wrapper w(out);
    w.token(sys.objective_name + ":");
    write_terms(w, sys.objective);
    w.end_line();
  }
  out << "Subject To\n";
  for (const auto& r : sys.rows) write_row(out, r);
  out << "Binary\n";
  {
    Wrapper w(out);
    for (const auto& b : sys.binaries) w.token(b);
    w.end_line();
  }
  out << "End\n";
}

ConstraintSystem read_lp(std::istream& in) {
  enum class Section { None, Objective, Rows, Binary, Done } sec = Section::None;
  ConstraintSystem sys;
  sys.objective_name.clear();
  RowScanner rows;
  RowScanner obj;
  bool seen_objective = false;
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '\\') continue;
    const std::string key = lower(t);
    if (key == "minimize" || key == "maximize" || key == "minimum" || key == "maximum") {
      sys.minimize = key[1] == 'i';
      sec = Section::Objective;
      seen_objective = true;
      continue;
    }
    if (key == "subject to" || key == "st" || key == "s.t.") {
      sec = Section::Rows;
      continue;
    }
    if (key == "binary" || key == "binaries" || key == "bin") {
      sec = Section::Binary;
      continue;
    }
    if (key == "end") {
      sec = Section::Done;
      continue;
    }
    std::istringstream ts(t);
    for (std::string tok; ts >> tok;) {
      switch (sec) {
        case Section::Objective:
          if (tok.size() > 1 && tok.back() == ':' && sys.objective_name.empty() && sys.objective.empty())
            sys.objective_name = tok.substr(0, tok.size() - 1);
          else
            obj.term(tok, sys.objective);
          break;
        case Section::Rows: rows.feed(tok); break;
        case Section::Binary: sys.binaries.push_back(tok); break;
        case Section::None:
        case Section::Done: corrupt("text outside any section: '" + tok + "'");
      }
    }
  }
  if (!seen_objective) corrupt("missing objective section");
  if (sec != Section::Done) corrupt("missing End");
  rows.finish();
  sys.rows = std::move(rows.rows);
  return sys;
}

FollowerAnnotation follower_annotation(const ConstraintSystem& sys) {
  FollowerAnnotation aux;
  for (const auto& b : sys.binaries) {
    auto v = parse_variable(b);
    if (v && v->kind != VarRef::Kind::Y) aux.variables.push_back(b);
  }
  for (const auto& r : sys.rows)
    if (is_follower_row(r.name)) aux.rows.push_back(r.name);
  aux.objective = {{1, "z"}};
  aux.minimize = true;
  return aux;
}

void write_aux(const FollowerAnnotation& aux, std::ostream& out) {
  out << "# follower annotation v1\n";
  out << "N " << aux.variables.size() << '\n';
  out << "M " << aux.rows.size() << '\n';
  for (const auto& v : aux.variables) out << "LC " << v << '\n';
  for (const auto& r : aux.rows) out << "LR " << r << '\n';
  for (const auto& t : aux.objective) out << "LO " << t.coef << ' ' << t.var << '\n';
  out << "OS " << (aux.minimize ? 1 : -1) << '\n';
}

FollowerAnnotation read_aux(std::istream& in) {
  FollowerAnnotation aux;
  std::optional<long> n, m;
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ts(t);
    std::string key, a, b;
    ts >> key >> a;
    if (a.empty()) corrupt("aux line without a value: " + t);
    if (key == "N") n = to_long(a);
    else if (key == "M") m = to_long(a);
    else if (key == "LC") aux.variables.push_back(a);
    else if (key == "LR") aux.rows.push_back(a);
    else if (key == "LO") {
      ts >> b;
      auto c = to_long(a);
      if (!c || b.empty()) corrupt("bad LO line: " + t);
      aux.objective.push_back({*c, b});
    } else if (key == "OS") {
      auto v = to_long(a);
      if (!v || (*v != 1 && *v != -1)) corrupt("bad OS line: " + t);
      aux.minimize = *v == 1;
    } else {
      corrupt("unknown aux key " + key);
    }
  }
  if (!n || !m) corrupt("aux file needs N and M");
  if (static_cast<std::size_t>(*n) != aux.variables.size() || static_cast<std::size_t>(*m) != aux.rows.size())
    corrupt("aux counts disagree with the listed names");
  return aux;
}

void export_cuts(const UnavoidableCollection& cuts, const std::filesystem::path& path) {
  if (cuts.empty()) throw Error(ErrorCode::EmptyCollection, "no cuts to export");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& r : cut_rows(cuts)) write_row(out, r);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<Row> read_cut_rows(std::istream& in) {
  RowScanner rows;
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '\\' || t[0] == '#') continue;
    std::istringstream ts(t);
    for (std::string tok; ts >> tok;) rows.feed(tok);
  }
  rows.finish();
  return std::move(rows.rows);
}

BilevelModelFiles export_bilevel(const Grid& g, const UnavoidableCollection* cuts,
                                 const std::filesystem::path& out_dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  const ConstraintSystem sys = bilevel_system(g, cuts);
  const FollowerAnnotation aux = follower_annotation(sys);
  BilevelModelFiles files{out_dir / (stem + ".lp"), out_dir / (stem + ".aux"), std::nullopt,
                          sys.variable_count(), sys.row_count()};

  const auto write = [](const std::filesystem::path& p, auto&& body) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    body(out);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + p.string());
  };
  write(files.model_path, [&](std::ostream& o) { write_lp(sys, o); });
  write(files.aux_path, [&](std::ostream& o) { write_aux(aux, o); });
  if (cuts && !cuts->empty()) {
    files.cuts_path = out_dir / (stem + ".cuts");
    export_cuts(*cuts, *files.cuts_path);
  }

  const auto open = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::IoError, "cannot reopen " + p.string());
    return in;
  };
  {
    auto in = open(files.model_path);
    if (!(read_lp(in) == sys)) throw Error(ErrorCode::InternalConsistency, "model file does not round-trip");
  }
  {
    auto in = open(files.aux_path);
    if (!(read_aux(in) == aux)) throw Error(ErrorCode::InternalConsistency, "aux file does not round-trip");
  }
  if (files.cuts_path) {
    auto in = open(*files.cuts_path);
    if (!(read_cut_rows(in) == cut_rows(*cuts)))
      throw Error(ErrorCode::InternalConsistency, "cuts file does not round-trip");
  }
  return files;
}

std::optional<std::vector<std::uint8_t>> follower_alternate(const ConstraintSystem& sys, const IndexSet& clues) {
  std::size_t ys = 0;
  for (const auto& b : sys.binaries)
    if (auto v = parse_variable(b); v && v->kind == VarRef::Kind::Y) ++ys;
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ys))));
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != ys || s * s != n)
    throw Error(ErrorCode::InvalidArgument, "model does not describe a square grid");
  if (clues.universe() != ys) throw Error(ErrorCode::SizeMismatch, "clue mask does not match the model");
  std::vector<std::uint8_t> target(ys, 0);
  for (const auto& r : sys.rows) {
    if (!r.name.starts_with("F1_")) continue;
    for (const auto& t : r.terms)
      if (auto v = parse_variable(t.var); v && v->kind == VarRef::Kind::X)
        target[Cell{v->i, v->j}.index(n)] = static_cast<std::uint8_t>(v->k);
  }
  for (auto d : target)
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "model lacks an F1 row for some cell");
  auto r = engine::find_alternate(Layout{n, s}, target, clues);
  return r.value;
}

}  // namespace mscp
