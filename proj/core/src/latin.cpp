#include "mscp/latin.hpp"

#include "mscp/engine.hpp"
#include "mscp/error.hpp"

namespace mscp {

LatinSquare::LatinSquare(int n, std::vector<std::uint8_t> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 1 || n > 64) throw Error(ErrorCode::InvalidArgument, "side must be in [1, 64]");
  if (entries_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw Error(ErrorCode::LengthMismatch, "expected n*n entries");
  for (int r = 0; r < n; ++r) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (int c = 0; c < n; ++c) {
      const int a = entries_[static_cast<std::size_t>(r * n + c)];
      const int b = entries_[static_cast<std::size_t>(c * n + r)];
      if (a < 1 || a > n || b < 1 || b > n) throw Error(ErrorCode::IllegalCharacter, "symbol out of range");
      const std::uint64_t ba = std::uint64_t{1} << (a - 1);
      const std::uint64_t bb = std::uint64_t{1} << (b - 1);
      if (row & ba) throw Error(ErrorCode::ConstraintViolation, "symbol repeated in row " + std::to_string(r + 1));
      if (col & bb)
        throw Error(ErrorCode::ConstraintViolation, "symbol repeated in column " + std::to_string(r + 1));
      row |= ba;
      col |= bb;
    }
  }
}

LatinSquare parse_latin(std::string_view text) {
  int n = 1;
  while (static_cast<std::size_t>(n * n) < text.size()) ++n;
  if (static_cast<std::size_t>(n * n) != text.size() || n > 9)
    throw Error(ErrorCode::LengthMismatch, "expected n*n digits with n <= 9");
  std::vector<std::uint8_t> e;
  e.reserve(text.size());
  for (char ch : text) {
    if (ch < '1' || ch > '9') throw Error(ErrorCode::IllegalCharacter, std::string("bad symbol '") + ch + "'");
    e.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return {n, std::move(e)};
}

std::string serialize(const LatinSquare& square) {
  std::string out;
  for (auto v : square.entries()) out.push_back(static_cast<char>('0' + v));
  return out;
}

FcpInstance latin_fcp(const LatinSquare& square) {
  FcpInstance inst;
  inst.certificate_length = square.entries().size();
  inst.target_certificate.assign(square.entries().begin(), square.entries().end());
  const Layout layout{square.side(), 0};
  const auto target = square.entries();
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
