#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "threewc/halfspace.hpp"
#include "threewc/rational.hpp"
#include "threewc/simplex.hpp"

namespace threewc::poly {

namespace detail {

// Incremental exact Gaussian elimination used to walk subsets of rows while
// skipping linearly dependent choices early.
class EchelonStack {
 public:
  explicit EchelonStack(std::size_t n) : n_(n) {}

  std::size_t size() const { return rows_.size(); }

  /// Tries to push (coeffs, rhs) as an equality; returns false (no change)
  /// when coeffs is linearly dependent on the rows already present.
  bool push(std::vector<Rational> coeffs, Rational rhs) {
    for (const auto& r : rows_) {
      const Rational f = coeffs[r.pivot];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) coeffs[j] -= f * r.coeffs[j];
      rhs -= f * r.rhs;
    }
    std::size_t pivot = n_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sgn(coeffs[j]) != 0) {
        pivot = j;
        break;
      }
    }
    if (pivot == n_) return false;
    const Rational inv = rat(1) / coeffs[pivot];
    for (auto& c : coeffs) c *= inv;
    rhs *= inv;
    rows_.push_back({pivot, std::move(coeffs), std::move(rhs)});
    return true;
  }

  void pop() { rows_.pop_back(); }

  /// Solves the current n x n system; requires size() == n.
  std::vector<Rational> solve() const {
    std::vector<Rational> x(n_, Rational(0));
    // Rows are unit-pivot; eliminate back to front in pivot order.
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].pivot > rows_[b].pivot; });
    for (std::size_t i : order) {
      Rational v = rows_[i].rhs;
      for (std::size_t j = rows_[i].pivot + 1; j < n_; ++j) {
        if (sgn(rows_[i].coeffs[j]) != 0) v -= rows_[i].coeffs[j] * x[j];
      }
      x[rows_[i].pivot] = std::move(v);
    }
    return x;
  }

 private:
  struct Row {
    std::size_t pivot;
    std::vector<Rational> coeffs;
    Rational rhs;
  };
  std::size_t n_;
  std::vector<Row> rows_;
};

}  // namespace detail

/// Enumerates all vertices of the (bounded or unbounded) polyhedron: points
/// where some n linearly independent rows are tight and all rows hold. Exact;
/// output is sorted lexicographically and duplicate-free.
inline std::vector<std::vector<Rational>> enumerate_vertices(const HalfspaceSystem& input) {
  HalfspaceSystem sys = input;
  sys.dedupe_rows();
  if (sys.is_infeasible_marker()) return {};
  const std::size_t n = sys.num_vars();
  const std::size_t m = sys.num_rows();
  std::set<std::vector<Rational>> found;
  if (m < n) return {};

  detail::EchelonStack stack(n);
  auto recurse = [&](auto&& self, std::size_t first) -> void {
    if (stack.size() == n) {
      auto x = stack.solve();
      if (sys.contains(x)) found.insert(std::move(x));
      return;
    }
    const std::size_t need = n - stack.size();
    for (std::size_t i = first; i + need <= m; ++i) {
      if (!stack.push(sys.row(i).coeffs, sys.row(i).rhs)) continue;
      self(self, i + 1);
      stack.pop();
    }
  };
  recurse(recurse, 0);
  return {found.begin(), found.end()};
}

/// True when every point of `inner` satisfies `outer`: each outer row's
/// maximum over inner stays within its bound. Both systems must share the
/// same variable order. Infeasible systems are subsets of everything.
inline bool polytope_subset(const HalfspaceSystem& inner, const HalfspaceSystem& outer) {
  if (inner.variables() != outer.variables())
    throw std::invalid_argument("systems use different variable orders");
  if (inner.is_infeasible_marker()) return true;
  for (const auto& r : outer.rows()) {
    if (HalfspaceSystem::is_zero_row(r)) {
      if (r.rhs >= 0) continue;
      // Outer is empty; the subset holds only if inner is empty too.
      LpResult feas = lp_maximize(inner, std::vector<Rational>(inner.num_vars(), Rational(0)));
      if (feas.status == LpStatus::Infeasible) continue;
      return false;
    }
    LpOptions opt;
    opt.stop_when_above = r.rhs;
    LpResult res = lp_maximize(inner, r.coeffs, opt);
    if (res.status == LpStatus::Infeasible) return true;
    if (res.status != LpStatus::Optimal || res.value > r.rhs) return false;
  }
  return true;
}

inline bool polytope_equal(const HalfspaceSystem& a, const HalfspaceSystem& b) {
  return polytope_subset(a, b) && polytope_subset(b, a);
}

}  // namespace threewc::poly
