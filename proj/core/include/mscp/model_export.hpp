#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mscp/grid.hpp"
#include "mscp/index_set.hpp"
#include "mscp/unavoidable.hpp"

namespace mscp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  long coef = 1;
  std::string var;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::Equal;
  long rhs = 0;
  friend bool operator==(const Row&, const Row&) = default;
};

// A binary linear program: objective, named rows, binary variables.
struct ConstraintSystem {
  bool minimize = true;
  std::string objective_name = "obj";
  std::vector<Term> objective;
  std::vector<Row> rows;
  std::vector<std::string> binaries;

  std::size_t variable_count() const { return binaries.size(); }
  std::size_t row_count() const { return rows.size(); }
  friend bool operator==(const ConstraintSystem&, const ConstraintSystem&) = default;
};

// x_i_j_k, y_i_j and z, 1-based, indices zero-padded to the width of n.
std::string x_name(int n, int i, int j, int k);
std::string y_name(int n, int i, int j);

struct VarRef {
  enum class Kind { X, Y, Z } kind = Kind::Z;
  int i = 0;
  int j = 0;
  int k = 0;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};
std::optional<VarRef> parse_variable(std::string_view name);

// Leader: min sum y, V1 (z = 1), one U row per cut. Follower: min z over
// G0-G3, F1 and N1.
ConstraintSystem bilevel_system(const Grid& g, const UnavoidableCollection* cuts = nullptr);
std::vector<Row> cut_rows(const UnavoidableCollection& cuts);

void write_lp(const ConstraintSystem& sys, std::ostream& out);
// Reads the subset of the LP text format that write_lp produces.
// Throws Error(CorruptFile).
ConstraintSystem read_lp(std::istream& in);

struct FollowerAnnotation {
  std::vector<std::string> variables;
  std::vector<std::string> rows;
  std::vector<Term> objective;
  bool minimize = true;
  friend bool operator==(const FollowerAnnotation&, const FollowerAnnotation&) = default;
};
FollowerAnnotation follower_annotation(const ConstraintSystem& sys);
void write_aux(const FollowerAnnotation& aux, std::ostream& out);
FollowerAnnotation read_aux(std::istream& in);

struct BilevelModelFiles {
  std::filesystem::path model_path;
  std::filesystem::path aux_path;
  std::optional<std::filesystem::path> cuts_path;
  std::size_t variables = 0;
  std::size_t rows = 0;
};

// Writes <stem>.lp, <stem>.aux and, for a nonempty collection, <stem>.cuts,
// then re-reads them and throws Error(InternalConsistency) unless they
// reproduce the in-memory system.
BilevelModelFiles export_bilevel(const Grid& g, const UnavoidableCollection* cuts,
                                 const std::filesystem::path& out_dir, const std::string& stem = "mscp");

// One U row per line. Throws Error(EmptyCollection) for an empty collection.
void export_cuts(const UnavoidableCollection& cuts, const std::filesystem::path& path);
std::vector<Row> read_cut_rows(std::istream& in);

// Follower with y fixed to `clues` and z = 0, solved by the engine on the
// grid read back from the F1 rows. Returns an alternate grid if feasible.
std::optional<std::vector<std::uint8_t>> follower_alternate(const ConstraintSystem& sys, const IndexSet& clues);

}  // namespace mscp
