#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "threewc/halfspace.hpp"
#include "threewc/rational.hpp"

namespace threewc::poly {

struct InfeasibleError : std::runtime_error {
  InfeasibleError() : std::runtime_error("linear program is infeasible") {}
};

struct UnboundedError : std::runtime_error {
  UnboundedError() : std::runtime_error("linear program is unbounded") {}
};

enum class LpStatus { Optimal, Infeasible, Unbounded, ExceedsThreshold };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> point;  // argmax in original (free) variables
};

struct LpOptions {
  /// Stop phase 2 as soon as the objective is known to exceed this value
  /// (used by redundancy pruning, which only needs a yes/no answer).
  std::optional<Rational> stop_when_above;
  /// Row index to leave out of the program, if any.
  std::optional<std::size_t> skip_row;
};

/// Exact two-phase primal simplex with Bland's rule over a halfspace system.
/// Free variables are split as x = u - v; every step is rational, so results
/// carry no rounding. Bland's rule guarantees termination.
class SimplexSolver {
 public:
  SimplexSolver(const HalfspaceSystem& sys, LpOptions options = {})
      : options_(std::move(options)) {
    nfree_ = sys.num_vars();
    std::size_t m = 0;
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
      if (options_.skip_row && *options_.skip_row == i) continue;
      ++m;
    }
    nstruct_ = 2 * nfree_ + m;  // u, v, slacks
    ncols_ = nstruct_ + m;      // + one artificial per row
    rows_.reserve(m);
    basis_.reserve(m);
    std::size_t r = 0;
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
      if (options_.skip_row && *options_.skip_row == i) continue;
      const auto& src = sys.row(i);
      std::vector<Rational> row(ncols_ + 1, Rational(0));
      const bool flip = src.rhs < 0;
      const Rational sign = flip ? rat(-1) : rat(1);
      for (std::size_t j = 0; j < nfree_; ++j) {
        row[j] = sign * src.coeffs[j];
        row[nfree_ + j] = -row[j];
      }
      row[2 * nfree_ + r] = sign;            // slack
      row[nstruct_ + r] = Rational(1);       // artificial, initially basic
      row[ncols_] = sign * src.rhs;          // b >= 0
      rows_.push_back(std::move(row));
      basis_.push_back(nstruct_ + r);
      ++r;
    }
  }

  LpResult maximize(const std::vector<Rational>& objective) {
    if (objective.size() != nfree_)
      throw std::invalid_argument("objective dimension does not match variable count");

    // Phase 1: maximize -sum(artificials).
    std::vector<Rational> cost(ncols_, Rational(0));
    Rational value(0);
    for (std::size_t j = nstruct_; j < ncols_; ++j) cost[j] = rat(-1);
    reduce_against_basis(cost, value);
    run(cost, value, /*threshold=*/nullptr);
    if (value < 0) return {LpStatus::Infeasible, Rational(0), {}};
    drop_artificials();

    // Phase 2: maximize the requested objective over u - v.
    cost.assign(ncols_, Rational(0));
    value = 0;
    for (std::size_t j = 0; j < nfree_; ++j) {
      cost[j] = objective[j];
      cost[nfree_ + j] = -objective[j];
    }
    reduce_against_basis(cost, value);
    const Rational* threshold =
        options_.stop_when_above ? &*options_.stop_when_above : nullptr;
    if (!run(cost, value, threshold)) return {LpStatus::Unbounded, Rational(0), {}};
    LpResult result;
    result.status = (threshold && value > *threshold) ? LpStatus::ExceedsThreshold
                                                      : LpStatus::Optimal;
    result.value = std::move(value);
    result.point = extract_point();
    return result;
  }

 private:
  // Restores reduced costs after a basis already exists: for every basic
  // column with nonzero cost, eliminate it from the cost row.
  void reduce_against_basis(std::vector<Rational>& cost, Rational& value) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational c = cost[basis_[i]];
      if (sgn(c) == 0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (sgn(rows_[i][j]) != 0) cost[j] -= c * rows_[i][j];
      }
      value += c * rows_[i][ncols_];
    }
  }

  // Returns false on unboundedness. Bland's rule: entering column is the
  // lowest-index one with positive reduced cost; ties on the ratio test break
  // toward the lowest basic variable index.
  bool run(std::vector<Rational>& cost, Rational& value, const Rational* threshold) {
    for (;;) {
      if (threshold && value > *threshold) return true;
      std::size_t enter = ncols_;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (sgn(cost[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter == ncols_) return true;
      std::size_t leave = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rational ratio = rows_[i][ncols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter, cost, value);
    }
  }

  void pivot(std::size_t leave, std::size_t enter, std::vector<Rational>& cost,
             Rational& value) {
    auto& prow = rows_[leave];
    const Rational inv = rat(1) / prow[enter];
    for (auto& x : prow) {
      if (sgn(x) != 0) x *= inv;
    }
    prow[enter] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == leave) continue;
      eliminate(rows_[i], prow, enter);
    }
    const Rational f = cost[enter];
    if (sgn(f) != 0) {
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (sgn(prow[j]) != 0) cost[j] -= f * prow[j];
      }
      value += f * prow[ncols_];
    }
    basis_[leave] = enter;
  }

  static void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow,
                        std::size_t enter) {
    const Rational f = row[enter];
    if (sgn(f) == 0) return;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (sgn(prow[j]) != 0) row[j] -= f * prow[j];
    }
    row[enter] = 0;
  }

  // After phase 1 pivots any basic artificial out where possible, then blocks
  // artificial columns from re-entering by pinning their cost influence: rows
  // whose artificial cannot leave are degenerate duplicates and are removed.
  void drop_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < nstruct_) {
        ++i;
        continue;
      }
      std::size_t enter = nstruct_;
      for (std::size_t j = 0; j < nstruct_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          enter = j;
          break;
        }
      }
      if (enter == nstruct_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      std::vector<Rational> dummy_cost(ncols_, Rational(0));
      Rational dummy_value(0);
      pivot(i, enter, dummy_cost, dummy_value);
      ++i;
    }
    // Physically remove the artificial columns, keeping b as the last slot.
    for (auto& row : rows_) {
      row[nstruct_] = std::move(row[ncols_]);
      row.resize(nstruct_ + 1);
    }
    ncols_ = nstruct_;
  }

  std::vector<Rational> extract_point() const {
    std::vector<Rational> u(nfree_, Rational(0)), v(nfree_, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < nfree_)
        u[basis_[i]] = rows_[i][ncols_];
      else if (basis_[i] < 2 * nfree_)
        v[basis_[i] - nfree_] = rows_[i][ncols_];
    }
    std::vector<Rational> x(nfree_);
    for (std::size_t j = 0; j < nfree_; ++j) x[j] = u[j] - v[j];
    return x;
  }

  LpOptions options_;
  std::size_t nfree_ = 0;
  std::size_t nstruct_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::vector<Rational>> rows_;  // each: ncols_ coefficients + b
  std::vector<std::size_t> basis_;
};

/// Maximizes objective . x over the system. Throws InfeasibleError or
/// UnboundedError; otherwise returns the exact optimum and one argmax.
inline LpResult lp_maximize(const HalfspaceSystem& sys, const std::vector<Rational>& objective,
                            LpOptions options = {}) {
  SimplexSolver solver(sys, std::move(options));
  return solver.maximize(objective);
}

inline std::pair<Rational, std::vector<Rational>> simplex_max(
    const HalfspaceSystem& sys, const std::vector<Rational>& objective) {
  LpResult r = lp_maximize(sys, objective);
  if (r.status == LpStatus::Infeasible) throw InfeasibleError();
  if (r.status == LpStatus::Unbounded) throw UnboundedError();
  return {r.value, r.point};
}

}  // namespace threewc::poly
