#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

namespace threewc {

/// Antenna counts of the three nodes, ordered M1 >= M2 >= M3 >= 1. Node 1 is
/// the intermittently available one.
struct NodeConfig {
  int m1;
  int m2;
  int m3;

  NodeConfig(int m1_, int m2_, int m3_) : m1(m1_), m2(m2_), m3(m3_) {
    if (!(m1 >= m2 && m2 >= m3 && m3 >= 1))
      throw std::invalid_argument("antenna counts must satisfy M1 >= M2 >= M3 >= 1");
  }

  int antennas(int node) const {
    switch (node) {
      case 1: return m1;
      case 2: return m2;
      case 3: return m3;
      default: throw std::invalid_argument("node index must be 1, 2, or 3");
    }
  }

  std::string label() const {
    return std::to_string(m1) + "," + std::to_string(m2) + "," + std::to_string(m3);
  }

  bool operator==(const NodeConfig& other) const = default;
};

inline int pos_part(int x) { return x > 0 ? x : 0; }

/// The six ordered node pairs (src, dst) in fixed order.
inline constexpr std::array<std::pair<int, int>, 6> kLinkOrder = {
    {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}}};

/// Third node of {1,2,3} besides a and b.
inline int other_node(int a, int b) { return 6 - a - b; }

}  // namespace threewc
