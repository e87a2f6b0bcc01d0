#include "threewc/allocation.hpp"

#include <gtest/gtest.h>

#include "threewc/regions.hpp"

using threewc::NodeConfig;
namespace poly = threewc::poly;
namespace scheme = threewc::scheme;
using poly::rat;
using scheme::StreamAllocation;

TEST(Allocation, AccessorsAndValidation) {
  StreamAllocation a;
  EXPECT_EQ(a.count(1, 2, 1), 0);
  a.set_count(1, 2, 1, 2);
  a.set_count(2, 3, 2, 1);
  EXPECT_EQ(a.count(1, 2, 1), 2);
  EXPECT_EQ(a.total(1, 2), 2);
  EXPECT_EQ(a.node_total(1), 2);
  EXPECT_EQ(a.node_total(2), 1);
  a.set_overlap(3, 2, 1);  // unordered: same as {2,3}
  EXPECT_EQ(a.overlap(2, 3), 1);
  EXPECT_THROW(a.set_count(1, 2, 3, 1), std::invalid_argument);
  EXPECT_THROW(a.set_count(1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(a.set_count(1, 2, 1, -1), std::invalid_argument);
  EXPECT_THROW(a.overlap(1, 1), std::invalid_argument);
}

TEST(Allocation, ValidatorAcceptsSumOptimal) {
  for (const NodeConfig& cfg : {NodeConfig(3, 2, 1), NodeConfig(4, 3, 2),
                                NodeConfig(2, 2, 2), NodeConfig(1, 1, 1),
                                NodeConfig(4, 4, 1)}) {
    const StreamAllocation a = scheme::sum_optimal_allocation(cfg);
    const auto check = scheme::validate_allocation(cfg, a);
    EXPECT_TRUE(check.ok) << cfg.label()
                          << (check.violations.empty() ? "" : check.violations.front());
  }
}

TEST(Allocation, SumOptimalHitsFormulaForAnyTau) {
  for (const NodeConfig& cfg : {NodeConfig(3, 2, 1), NodeConfig(4, 3, 2)}) {
    for (const auto& tau : {rat(0), rat(1, 4), rat(1, 2), rat(1)}) {
      const auto dof = scheme::allocation_dof(scheme::sum_optimal_allocation(cfg), tau);
      EXPECT_EQ(dof.sum(), poly::sum_dof_formula(cfg, tau)) << cfg.label();
      EXPECT_TRUE(poly::theorem1_region(cfg, tau).contains(dof.coords()));
    }
  }
}

TEST(Allocation, ValidatorCatchesEachFamily) {
  const NodeConfig cfg(3, 2, 1);

  // Zero-forcing budget: node 3 has no null space toward node 1.
  StreamAllocation zf;
  zf.set_count(3, 2, 1, 1);
  EXPECT_FALSE(scheme::validate_allocation(cfg, zf).ok);

  // Transmit budget: node 2 cannot carry three streams on two antennas.
  StreamAllocation tx;
  tx.set_count(2, 1, 2, 2);
  tx.set_count(2, 3, 2, 1);
  EXPECT_FALSE(scheme::validate_allocation(cfg, tx).ok);

  // Overlap needs aligned streams on both sides and room at the third node.
  StreamAllocation ov;
  ov.set_count(2, 3, 2, 1);
  ov.set_overlap(2, 3, 1);
  EXPECT_FALSE(scheme::validate_allocation(cfg, ov).ok);  // a32_2 = 0

  StreamAllocation cap;
  cap.set_count(1, 3, 2, 2);
  cap.set_count(3, 1, 2, 1);
  cap.set_overlap(1, 3, 2);  // exceeds min(a13_2, a31_2)
  EXPECT_FALSE(scheme::validate_allocation(cfg, cap).ok);

  // Receive budget at node 3: more desired streams than antennas.
  StreamAllocation rx;
  rx.set_count(1, 3, 1, 1);
  rx.set_count(2, 3, 2, 1);
  EXPECT_FALSE(scheme::validate_allocation(cfg, rx).ok);
}

TEST(Allocation, AlignmentRelievesReceiveSpace) {
  // (1,1,1): the 2<->3 exchange with a23 = a32 = 1 overflows node 1 unless
  // the two streams align there.
  const NodeConfig cfg(1, 1, 1);
  StreamAllocation a;
  a.set_count(2, 3, 2, 1);
  a.set_count(3, 2, 2, 1);
  EXPECT_FALSE(scheme::validate_allocation(cfg, a).ok);
  a.set_overlap(2, 3, 1);
  EXPECT_TRUE(scheme::validate_allocation(cfg, a).ok);
}

TEST(Allocation, DofScalingTouchesOnlyIntermittentLinks) {
  StreamAllocation a;
  a.set_count(1, 2, 1, 2);
  a.set_count(2, 1, 2, 1);
  a.set_count(2, 3, 2, 1);
  a.set_count(3, 2, 2, 1);
  const auto dof = scheme::allocation_dof(a, rat(1, 4));
  EXPECT_EQ(dof.d12, rat(1, 2));
  EXPECT_EQ(dof.d21, rat(1, 4));
  EXPECT_EQ(dof.d23, rat(1));
  EXPECT_EQ(dof.d32, rat(1));
  EXPECT_EQ(dof.d13, rat(0));
  EXPECT_THROW(scheme::allocation_dof(a, rat(2)), std::invalid_argument);
}

TEST(Allocation, SumOptimalIsTightInRawSystem) {
  // Embeds the allocation plus its DoF point into the full constraint
  // system; membership certifies feasibility against every family at once.
  const NodeConfig cfg(4, 3, 2);
  const auto tau = rat(1, 2);
  const StreamAllocation a = scheme::sum_optimal_allocation(cfg);
  const auto raw = poly::raw_constraint_system(cfg, tau);
  std::vector<poly::Rational> x(raw.num_vars(), rat(0));
  const auto set = [&](const std::string& name, poly::Rational v) {
    x[raw.var_index(name)] = std::move(v);
  };
  set("a12_1", rat(a.count(1, 2, 1)));
  set("a21_1", rat(a.count(2, 1, 1)));
  set("a23_2", rat(a.count(2, 3, 2)));
  set("a32_2", rat(a.count(3, 2, 2)));
  set("abar23", rat(a.overlap(2, 3)));
  const auto dof = scheme::allocation_dof(a, tau);
  const auto names = poly::dof_variables();
  const auto coords = dof.coords();
  for (std::size_t i = 0; i < names.size(); ++i) set(names[i], coords[i]);
  EXPECT_TRUE(raw.contains(x));
}
