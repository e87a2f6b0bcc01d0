#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "threewc/config.hpp"
#include "threewc/rational.hpp"
#include "threewc/regions.hpp"

namespace threewc::scheme {

/// Integer stream allocation of the nonadaptive scheme: per ordered link a
/// zero-forced count (q = 1) and an alignment-eligible count (q = 2), plus
/// the claimed pairwise alignment overlaps.
class StreamAllocation {
 public:
  StreamAllocation() {
    counts_.fill(0);
    overlaps_.fill(0);
  }

  int count(int from, int to, int q) const { return counts_[slot(from, to, q)]; }
  void set_count(int from, int to, int q, int value) {
    if (value < 0) throw std::invalid_argument("stream counts are nonnegative");
    counts_[slot(from, to, q)] = value;
  }

  int total(int from, int to) const { return count(from, to, 1) + count(from, to, 2); }

  /// Overlap of the aligned streams of the unordered pair {a, b}.
  int overlap(int a, int b) const { return overlaps_[pair_slot(a, b)]; }
  void set_overlap(int a, int b, int value) {
    if (value < 0) throw std::invalid_argument("overlaps are nonnegative");
    overlaps_[pair_slot(a, b)] = value;
  }

  int node_total(int node) const {
    int t = 0;
    for (const auto [i, j] : kLinkOrder) {
      if (i == node) t += total(i, j);
    }
    return t;
  }

  bool operator==(const StreamAllocation&) const = default;

 private:
  static std::size_t slot(int from, int to, int q) {
    if (q != 1 && q != 2) throw std::invalid_argument("stream type q must be 1 or 2");
    for (std::size_t k = 0; k < kLinkOrder.size(); ++k) {
      if (kLinkOrder[k].first == from && kLinkOrder[k].second == to)
        return 2 * k + static_cast<std::size_t>(q - 1);
    }
    throw std::invalid_argument("links connect two distinct nodes in {1,2,3}");
  }

  static std::size_t pair_slot(int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == 2 && b == 3) return 0;
    if (a == 1 && b == 3) return 1;
    if (a == 1 && b == 2) return 2;
    throw std::invalid_argument("pairs are unordered subsets of {1,2,3}");
  }

  std::array<int, 12> counts_;
  std::array<int, 3> overlaps_;
};

struct AllocationCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Verifies the four feasibility families: zero-forcing null-space budgets,
/// transmit dimensions, alignment overlap caps, and receive dimensions.
inline AllocationCheck validate_allocation(const NodeConfig& cfg,
                                           const StreamAllocation& a) {
  AllocationCheck check;
  const auto fail = [&](std::string msg) {
    check.ok = false;
    check.violations.push_back(std::move(msg));
  };

  for (const auto [i, j] : kLinkOrder) {
    const int k = other_node(i, j);
    const int cap = pos_part(cfg.antennas(i) - cfg.antennas(k));
    if (a.count(i, j, 1) > cap)
      fail("zero-forcing budget exceeded on link " + std::to_string(i) + "->" +
           std::to_string(j));
  }

  for (int i = 1; i <= 3; ++i) {
    if (a.node_total(i) > cfg.antennas(i))
      fail("transmit dimensions exceeded at node " + std::to_string(i));
  }

  for (const auto [i, j] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{1, 2}}) {
    const int k = other_node(i, j);
    const int cap = pos_part(cfg.antennas(i) + cfg.antennas(j) - cfg.antennas(k));
    const int ov = a.overlap(i, j);
    if (ov > a.count(i, j, 2) || ov > a.count(j, i, 2) || ov > cap)
      fail("alignment overlap too large for pair {" + std::to_string(i) + "," +
           std::to_string(j) + "}");
  }

  for (int i = 1; i <= 3; ++i) {
    const int j = (i == 1) ? 2 : 1;
    const int k = other_node(i, j);
    const int used = a.total(j, i) + a.total(k, i) + a.count(j, k, 2) +
                     a.count(k, j, 2) - a.overlap(j, k);
    if (used > cfg.antennas(i))
      fail("receive dimensions exceeded at node " + std::to_string(i));
  }
  return check;
}

/// Sum-optimal allocation: zero-forced swap of the M2-M3 surplus between
/// node 1 and node 2, plus a full aligned exchange between nodes 2 and 3
/// overlapping as much as node 1's receive space requires.
inline StreamAllocation sum_optimal_allocation(const NodeConfig& cfg) {
  StreamAllocation a;
  a.set_count(1, 2, 1, cfg.m2 - cfg.m3);
  a.set_count(2, 1, 1, cfg.m2 - cfg.m3);
  a.set_count(2, 3, 2, cfg.m3);
  a.set_count(3, 2, 2, cfg.m3);
  a.set_overlap(2, 3, pos_part(cfg.m2 + cfg.m3 - cfg.m1));
  return a;
}

/// DoF point delivered by an allocation: links touching the intermittent
/// node are scaled by its availability.
inline poly::DofPoint allocation_dof(const StreamAllocation& a, const poly::Rational& tau) {
  poly::check_tau(tau);
  // Explicit return type: GMP's lazy expression objects must not outlive scale.
  const auto dof = [&](int i, int j) -> poly::Rational {
    const poly::Rational scale = (i == 1 || j == 1) ? tau : poly::rat(1);
    return scale * a.total(i, j);
  };
  return poly::DofPoint::of(dof(1, 2), dof(1, 3), dof(2, 1), dof(2, 3), dof(3, 1),
                            dof(3, 2));
}

}  // namespace threewc::scheme
