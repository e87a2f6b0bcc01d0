#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "threewc/halfspace.hpp"
#include "threewc/rational.hpp"
#include "threewc/simplex.hpp"

namespace threewc::poly {

/// Removes rows implied by the remaining ones, using one exact LP per row:
/// row a.x <= b is redundant iff max a.x over the others is <= b. The LP is
/// stopped early once the objective passes b. Detects infeasibility and
/// collapses the system to the canonical marker in that case.
inline void prune_redundant(HalfspaceSystem& sys) {
  sys.dedupe_rows();
  if (sys.is_infeasible_marker()) return;
  {
    // Per-row LPs each skip a row and can all stay feasible even when the
    // full system is empty, so settle feasibility once up front.
    const std::vector<Rational> zero(sys.num_vars(), Rational(0));
    if (lp_maximize(sys, zero).status == LpStatus::Infeasible) {
      sys.mark_infeasible();
      return;
    }
  }
  std::size_t i = 0;
  while (i < sys.num_rows() && sys.num_rows() > 1) {
    LpOptions opt;
    opt.stop_when_above = sys.row(i).rhs;
    opt.skip_row = i;
    LpResult r = lp_maximize(sys, sys.row(i).coeffs, opt);
    if (r.status == LpStatus::Infeasible) {
      sys.mark_infeasible();
      return;
    }
    const bool redundant =
        r.status == LpStatus::Optimal && r.value <= sys.row(i).rhs;
    if (redundant) {
      // Rebuild without row i; later rows shift down, so do not advance i.
      HalfspaceSystem next(sys.variables());
      for (std::size_t k = 0; k < sys.num_rows(); ++k) {
        if (k != i) next.add(sys.row(k).coeffs, sys.row(k).rhs);
      }
      sys = std::move(next);
    } else {
      ++i;
    }
  }
}

namespace detail {

// Eliminates one column in place (rows still carry the full variable list;
// the caller drops the column afterwards). Classic pairing: for rows with
// positive and negative coefficient on the variable, add the scaled pair.
inline std::vector<LinearInequality> fm_eliminate_column(
    const std::vector<LinearInequality>& rows, std::size_t col) {
  std::vector<std::size_t> pos, neg, zero;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int s = sgn(rows[i].coeffs[col]);
    if (s > 0)
      pos.push_back(i);
    else if (s < 0)
      neg.push_back(i);
    else
      zero.push_back(i);
  }
  std::vector<LinearInequality> out;
  out.reserve(zero.size() + pos.size() * neg.size());
  for (std::size_t i : zero) out.push_back(rows[i]);
  for (std::size_t ip : pos) {
    const auto& p = rows[ip];
    for (std::size_t in : neg) {
      const auto& n = rows[in];
      // p.coeffs[col] > 0 > n.coeffs[col]; combine to cancel the column.
      const Rational wp = -n.coeffs[col];
      const Rational wn = p.coeffs[col];
      LinearInequality row;
      row.coeffs.resize(p.coeffs.size());
      for (std::size_t j = 0; j < p.coeffs.size(); ++j)
        row.coeffs[j] = wp * p.coeffs[j] + wn * n.coeffs[j];
      row.rhs = wp * p.rhs + wn * n.rhs;
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace detail

struct FmOptions {
  /// Run exact-LP redundancy pruning after every single elimination. Keeps
  /// intermediate systems small; essential for deep projections.
  bool prune_every_step = true;
};

/// Projects the polyhedron onto the variables not listed in `drop`, by
/// Fourier-Motzkin elimination. The eliminated variable at each step is the
/// remaining drop candidate minimizing (#positive rows) * (#negative rows).
/// The result uses the surviving variables in their original order and is
/// pruned to an irredundant description (or the infeasibility marker).
inline HalfspaceSystem eliminate_variables(const HalfspaceSystem& input,
                                           const std::vector<std::string>& drop,
                                           FmOptions options = {}) {
  std::vector<bool> dropped(input.num_vars(), false);
  for (const auto& name : drop) {
    const std::size_t j = input.var_index(name);
    if (dropped[j]) throw std::invalid_argument("variable listed twice: " + name);
    dropped[j] = true;
  }
  if (drop.size() == input.num_vars())
    throw std::invalid_argument("cannot eliminate every variable");

  HalfspaceSystem work = input;
  work.dedupe_rows();
  std::vector<std::string> vars = input.variables();
  std::vector<bool> todo = dropped;

  for (std::size_t step = 0; step < drop.size(); ++step) {
    if (work.is_infeasible_marker()) break;
    // Pick the cheapest remaining variable.
    std::size_t best_col = vars.size();
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (!todo[j]) continue;
      std::size_t np = 0, nn = 0;
      for (const auto& r : work.rows()) {
        const int s = sgn(r.coeffs[j]);
        if (s > 0)
          ++np;
        else if (s < 0)
          ++nn;
      }
      const std::size_t score = np * nn;
      if (score < best_score) {
        best_score = score;
        best_col = j;
      }
    }
    auto combined = detail::fm_eliminate_column(work.rows(), best_col);

    // Rebuild over the smaller variable list.
    std::vector<std::string> next_vars;
    std::vector<bool> next_todo;
    next_vars.reserve(vars.size() - 1);
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (j == best_col) continue;
      next_vars.push_back(vars[j]);
      next_todo.push_back(todo[j]);
    }
    HalfspaceSystem next(next_vars);
    for (auto& r : combined) {
      std::vector<Rational> coeffs;
      coeffs.reserve(next_vars.size());
      for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
        if (j != best_col) coeffs.push_back(std::move(r.coeffs[j]));
      }
      next.add(std::move(coeffs), std::move(r.rhs));
    }
    next.dedupe_rows();
    if (options.prune_every_step) prune_redundant(next);
    work = std::move(next);
    vars = std::move(next_vars);
    todo = std::move(next_todo);
  }

  if (work.is_infeasible_marker()) {
    // Report infeasibility over the full surviving variable set even when it
    // was detected before all eliminations ran.
    std::vector<std::string> surviving;
    for (std::size_t j = 0; j < input.num_vars(); ++j) {
      if (!dropped[j]) surviving.push_back(input.variables()[j]);
    }
    HalfspaceSystem out(surviving);
    out.mark_infeasible();
    return out;
  }
  if (!options.prune_every_step) prune_redundant(work);
  return work;
}

}  // namespace threewc::poly
