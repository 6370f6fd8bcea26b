#pragma once

#include "mscp/grid.hpp"

namespace fixtures {

inline constexpr const char* kPuzzle17 =
    "...64.2..1.8....3............7.18....6....5...........3......1.4..2......2.5.....";
inline constexpr const char* kGrid =
    "793645281158792436642183795537418629961327548284956173375864912416239857829571364";

inline mscp::IndexSet green() { return mscp::cell_set(9, {{1, 3}, {1, 8}, {2, 3}, {2, 8}}); }
inline mscp::IndexSet blue() {
  return mscp::cell_set(9, {{4, 1}, {4, 2}, {4, 3}, {7, 1}, {7, 2}, {7, 3}});
}
inline mscp::IndexSet red() {
  return mscp::cell_set(9, {{1, 4}, {1, 5}, {3, 4}, {3, 5}, {4, 4}, {4, 5}, {7, 4}, {7, 5}});
}

// Grid 0 of the oracle's enumeration order.
inline constexpr const char* kGrid4 = "1234341221434321";

}  // namespace fixtures
