#include "oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace oracle {

namespace {

void fill(Grid4& g, int cell, bool boxes, std::vector<Grid4>& out) {
  if (cell == 16) {
    out.push_back(g);
    return;
  }
  const int r = cell / 4, c = cell % 4;
  for (int d = 1; d <= 4; ++d) {
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      if (k < c && g[r * 4 + k] == d) ok = false;
      if (k < r && g[k * 4 + c] == d) ok = false;
    }
    if (ok && boxes) {
      const int br = r / 2 * 2, bc = c / 2 * 2;
      for (int i = br; i < br + 2; ++i)
        for (int j = bc; j < bc + 2; ++j)
          if (i * 4 + j < cell && g[i * 4 + j] == d) ok = false;
    }
    if (!ok) continue;
    g[cell] = static_cast<std::uint8_t>(d);
    fill(g, cell + 1, boxes, out);
    g[cell] = 0;
  }
}

}  // namespace

std::vector<Grid4> all_sudoku4() {
  std::vector<Grid4> out;
  Grid4 g{};
  fill(g, 0, true, out);
  return out;
}

std::vector<Grid4> all_latin4() {
  std::vector<Grid4> out;
  Grid4 g{};
  fill(g, 0, false, out);
  return out;
}

std::uint32_t diff_mask(const Grid4& a, const Grid4& b) {
  std::uint32_t m = 0;
  for (int i = 0; i < 16; ++i)
    if (a[i] != b[i]) m |= 1U << i;
  return m;
}

std::vector<std::uint32_t> minimal_unavoidable(const Grid4& g, const std::vector<Grid4>& all) {
  std::vector<std::uint32_t> diffs;
  for (const auto& h : all)
    if (h != g) diffs.push_back(diff_mask(g, h));
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  std::vector<std::uint32_t> out;
  for (auto d : diffs) {
    bool minimal = true;
    for (auto e : diffs)
      if (e != d && (e & d) == e) minimal = false;
    if (minimal) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

bool unique_under(const Grid4& g, std::uint32_t mask, const std::vector<Grid4>& all) {
  for (const auto& h : all) {
    if (h == g) continue;
    bool agrees = true;
    for (int i = 0; i < 16 && agrees; ++i)
      if ((mask >> i & 1U) && h[i] != g[i]) agrees = false;
    if (agrees) return false;
  }
  return true;
}

int min_clues(const Grid4& g, const std::vector<Grid4>& all) {
  for (int k = 0; k <= 16; ++k)
    for (std::uint32_t m = 0; m < (1U << 16); ++m)
      if (std::popcount(m) == k && unique_under(g, m, all)) return k;
  return -1;
}

int min_hitting_size(int universe, const std::vector<std::uint32_t>& family) {
  for (int k = 0; k <= universe; ++k)
    for (std::uint32_t m = 0; m < (1U << universe); ++m) {
      if (std::popcount(m) != k) continue;
      bool hits = true;
      for (auto s : family)
        if (!(s & m)) {
          hits = false;
          break;
        }
      if (hits) return k;
    }
  return -1;
}

std::optional<std::map<std::string, int>> zero_one_solve(const mscp::ConstraintSystem& sys,
                                                         const std::map<std::string, int>& fixed,
                                                         bool (*keep)(const std::string&)) {
  std::map<std::string, int> index;
  for (const auto& b : sys.binaries) index.emplace(b, static_cast<int>(index.size()));
  const int nv = static_cast<int>(index.size());
  struct R {
    std::vector<std::pair<int, long>> terms;
    mscp::Sense sense;
    long rhs;
  };
  std::vector<R> rows;
  std::vector<std::vector<int>> rows_of(nv);
  for (const auto& r : sys.rows) {
    if (!keep(r.name)) continue;
    R row{{}, r.sense, r.rhs};
    for (const auto& t : r.terms) row.terms.push_back({index.at(t.var), t.coef});
    for (const auto& t : row.terms) rows_of[t.first].push_back(static_cast<int>(rows.size()));
    rows.push_back(std::move(row));
  }
  std::vector<int> val(nv, -1);
  for (const auto& [name, v] : fixed) val[index.at(name)] = v;

  const auto ok = [&](const R& r) {
    long lo = 0, hi = 0;
    for (auto [v, c] : r.terms) {
      if (val[v] >= 0) {
        lo += c * val[v];
        hi += c * val[v];
      } else if (c > 0) {
        hi += c;
      } else {
        lo += c;
      }
    }
    if (r.sense != mscp::Sense::GreaterEqual && lo > r.rhs) return false;
    if (r.sense != mscp::Sense::LessEqual && hi < r.rhs) return false;
    return true;
  };
  for (const auto& r : rows)
    if (!ok(r)) return std::nullopt;

  std::vector<int> order;
  for (int v = 0; v < nv; ++v)
    if (val[v] < 0) order.push_back(v);
  std::function<bool(std::size_t)> dfs = [&](std::size_t at) {
    if (at == order.size()) return true;
    const int v = order[at];
    for (int b : {1, 0}) {
      val[v] = b;
      bool good = true;
      for (int r : rows_of[v])
        if (!ok(rows[r])) {
          good = false;
          break;
        }
      if (good && dfs(at + 1)) return true;
    }
    val[v] = -1;
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  std::map<std::string, int> out;
  for (const auto& [name, i] : index) out[name] = val[i];
  return out;
}

std::string to_text(const Grid4& g) {
  std::string s;
  for (auto d : g) s.push_back(static_cast<char>('0' + d));
  return s;
}

}  // namespace oracle
