#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "threewc/config.hpp"
#include "threewc/fourier_motzkin.hpp"
#include "threewc/halfspace.hpp"
#include "threewc/rational.hpp"
#include "threewc/simplex.hpp"

namespace threewc::poly {

/// Variable order shared by every DoF-space system: d12 d13 d21 d23 d31 d32.
inline const std::vector<std::string>& dof_variables() {
  static const std::vector<std::string> vars = {"d12", "d13", "d21",
                                                "d23", "d31", "d32"};
  return vars;
}

/// One point in DoF space; all entries must be nonnegative.
struct DofPoint {
  Rational d12, d13, d21, d23, d31, d32;

  static DofPoint of(Rational d12, Rational d13, Rational d21, Rational d23,
                     Rational d31, Rational d32) {
    DofPoint p{std::move(d12), std::move(d13), std::move(d21),
               std::move(d23), std::move(d31), std::move(d32)};
    for (const auto& c : p.coords()) {
      if (c < 0) throw std::invalid_argument("DoF entries must be nonnegative");
    }
    return p;
  }

  static DofPoint from_coords(const std::vector<Rational>& c) {
    if (c.size() != 6) throw std::invalid_argument("DoF point needs 6 coordinates");
    return of(c[0], c[1], c[2], c[3], c[4], c[5]);
  }

  std::vector<Rational> coords() const { return {d12, d13, d21, d23, d31, d32}; }

  Rational sum() const { return d12 + d13 + d21 + d23 + d31 + d32; }
};

inline void check_tau(const Rational& tau) {
  if (tau < 0 || tau > 1)
    throw std::invalid_argument("availability probability must lie in [0, 1]");
}

namespace detail {
inline std::string dvar(int i, int j) {
  return "d" + std::to_string(i) + std::to_string(j);
}
}  // namespace detail

/// Achievable DoF region of the nonadaptive scheme as an explicit list:
/// five bound families, instantiated for both orders of nodes 2 and 3 (the
/// two single-link bounds repeat), plus nonnegativity. Valid for tau > 0;
/// see canonical_region for the projection that also covers tau = 0.
inline HalfspaceSystem theorem1_region(const NodeConfig& cfg, const Rational& tau) {
  check_tau(tau);
  using detail::dvar;
  HalfspaceSystem sys(dof_variables());
  const Rational m1 = tau * cfg.m1;
  const Rational m2 = tau * cfg.m2;
  const Rational m3 = tau * cfg.m3;
  for (const auto [i, j] : {std::pair{2, 3}, std::pair{3, 2}}) {
    sys.add_terms({{dvar(1, i), rat(1)}, {dvar(1, j), rat(1)}, {dvar(i, j), tau}}, m1);
    sys.add_terms({{dvar(i, 1), rat(1)}, {dvar(j, 1), rat(1)}, {dvar(i, j), tau}}, m1);
    sys.add_terms({{dvar(i, 1), rat(1)}, {dvar(1, j), rat(1)}, {dvar(i, j), tau}}, m2);
    sys.add_terms({{dvar(3, 1), rat(1)}, {dvar(3, 2), tau}}, m3);
    sys.add_terms({{dvar(1, 3), rat(1)}, {dvar(2, 3), tau}}, m3);
  }
  sys.add_nonnegativity();
  return sys;
}

/// The two cut-set style sum bounds: d13+d23+d21 and d31+d32+d12, each at
/// most tau*M2 + (1-tau)*M3.
inline HalfspaceSystem lemma1_bounds(const NodeConfig& cfg, const Rational& tau) {
  check_tau(tau);
  HalfspaceSystem sys(dof_variables());
  const Rational bound = tau * cfg.m2 + (1 - tau) * cfg.m3;
  sys.add_terms({{"d13", rat(1)}, {"d23", rat(1)}, {"d21", rat(1)}}, bound);
  sys.add_terms({{"d31", rat(1)}, {"d32", rat(1)}, {"d12", rat(1)}}, bound);
  return sys;
}

/// Outer bound obeyed by every nonadaptive scheme: d31 + tau*d32 <= tau*M3.
/// Adaptive relaying can leave this halfspace, which is the separation the
/// block-Markov construction demonstrates.
inline HalfspaceSystem lemma3_outer(const NodeConfig& cfg, const Rational& tau) {
  check_tau(tau);
  HalfspaceSystem sys(dof_variables());
  sys.add_terms({{"d31", rat(1)}, {"d32", tau}}, tau * cfg.m3);
  return sys;
}

/// Variable order of the raw stream-allocation system: twelve per-link
/// stream counts a<i><j>_<q> (q=1 zero-forced, q=2 aligned), three pairwise
/// alignment overlaps, then the six DoF variables.
inline std::vector<std::string> raw_variables() {
  std::vector<std::string> vars;
  for (const auto [i, j] : kLinkOrder) {
    for (int q = 1; q <= 2; ++q)
      vars.push_back("a" + std::to_string(i) + std::to_string(j) + "_" + std::to_string(q));
  }
  vars.push_back("abar23");
  vars.push_back("abar13");
  vars.push_back("abar12");
  for (const auto& d : dof_variables()) vars.push_back(d);
  return vars;
}

/// Full constraint system of the nonadaptive scheme over stream counts and
/// DoF variables: zero-forcing existence, per-node transmit and receive
/// dimension budgets, alignment overlap caps, and the coupling equalities
/// tying each DoF variable to its stream counts (scaled by tau on the links
/// that touch the intermittent node). Projecting out the allocation
/// variables yields the DoF region.
inline HalfspaceSystem raw_constraint_system(const NodeConfig& cfg, const Rational& tau) {
  check_tau(tau);
  HalfspaceSystem sys(raw_variables());
  const auto avar = [](int i, int j, int q) {
    return "a" + std::to_string(i) + std::to_string(j) + "_" + std::to_string(q);
  };
  const auto abar = [](int i, int j) {
    if (i > j) std::swap(i, j);
    return "abar" + std::to_string(i) + std::to_string(j);
  };

  // Zero-forced streams fit in the null space toward the unintended receiver.
  for (const auto [i, j] : kLinkOrder) {
    const int k = other_node(i, j);
    sys.add_terms({{avar(i, j, 1), rat(1)}},
                  rat(pos_part(cfg.antennas(i) - cfg.antennas(k))));
  }

  // Transmit dimension budget per node.
  for (int i = 1; i <= 3; ++i) {
    std::vector<std::pair<std::string, Rational>> terms;
    for (const auto [s, t] : kLinkOrder) {
      if (s != i) continue;
      terms.emplace_back(avar(s, t, 1), rat(1));
      terms.emplace_back(avar(s, t, 2), rat(1));
    }
    sys.add_terms(terms, rat(cfg.antennas(i)));
  }

  // Alignment overlap between the aligned streams of pair {i, j} at node k.
  for (const auto [i, j] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{1, 2}}) {
    const int k = other_node(i, j);
    sys.add_terms({{abar(i, j), rat(1)}, {avar(i, j, 2), rat(-1)}}, rat(0));
    sys.add_terms({{abar(i, j), rat(1)}, {avar(j, i, 2), rat(-1)}}, rat(0));
    sys.add_terms({{abar(i, j), rat(1)}},
                  rat(pos_part(cfg.antennas(i) + cfg.antennas(j) - cfg.antennas(k))));
  }

  // Receive dimension budget per node: desired streams plus cross traffic of
  // the other two nodes, minus the overlap their aligned streams share.
  for (int i = 1; i <= 3; ++i) {
    const int j = (i == 1) ? 2 : 1;
    const int k = other_node(i, j);
    std::vector<std::pair<std::string, Rational>> terms;
    for (int q = 1; q <= 2; ++q) {
      terms.emplace_back(avar(j, i, q), rat(1));
      terms.emplace_back(avar(k, i, q), rat(1));
    }
    terms.emplace_back(avar(j, k, 2), rat(1));
    terms.emplace_back(avar(k, j, 2), rat(1));
    terms.emplace_back(abar(j, k), rat(-1));
    sys.add_terms(terms, rat(cfg.antennas(i)));
  }

  // DoF coupling: links into or out of node 1 only count when it listens.
  for (const auto [i, j] : kLinkOrder) {
    const Rational scale = (i == 1 || j == 1) ? tau : rat(1);
    const std::string d = detail::dvar(i, j);
    sys.add_terms(
        {{d, rat(1)}, {avar(i, j, 1), -scale}, {avar(i, j, 2), -scale}}, rat(0));
    sys.add_terms(
        {{d, rat(-1)}, {avar(i, j, 1), scale}, {avar(i, j, 2), scale}}, rat(0));
  }

  sys.add_nonnegativity();
  return sys;
}

/// Names of the fifteen allocation variables projected out by
/// canonical_region.
inline std::vector<std::string> allocation_variables() {
  auto vars = raw_variables();
  vars.resize(15);
  return vars;
}

/// DoF region obtained by eliminating all allocation variables from the raw
/// system. Defined for every tau in [0, 1]; coincides with theorem1_region
/// whenever tau > 0.
inline HalfspaceSystem canonical_region(const NodeConfig& cfg, const Rational& tau,
                                        FmOptions options = {}) {
  return eliminate_variables(raw_constraint_system(cfg, tau), allocation_variables(),
                             options);
}

/// Exact maximum of d12+...+d32 over a DoF-space region.
inline Rational sum_dof_max(const HalfspaceSystem& region) {
  return simplex_max(region, std::vector<Rational>(region.num_vars(), rat(1))).first;
}

/// Closed form for the maximum sum DoF: 2*tau*M2 + 2*(1-tau)*M3.
inline Rational sum_dof_formula(const NodeConfig& cfg, const Rational& tau) {
  check_tau(tau);
  return 2 * tau * cfg.m2 + 2 * (1 - tau) * cfg.m3;
}

}  // namespace threewc::poly
