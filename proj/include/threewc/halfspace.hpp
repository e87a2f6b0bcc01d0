#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "threewc/rational.hpp"

namespace threewc::poly {

/// One row of a halfspace system: coeffs . x <= rhs.
struct LinearInequality {
  std::vector<Rational> coeffs;
  Rational rhs;

  bool operator==(const LinearInequality& other) const = default;
};

/// Conjunction of non-strict linear inequalities over named variables.
class HalfspaceSystem {
 public:
  explicit HalfspaceSystem(std::vector<std::string> variables)
      : variables_(std::move(variables)) {
    if (variables_.empty()) throw std::invalid_argument("halfspace system needs variables");
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i].empty()) throw std::invalid_argument("empty variable name");
      if (!index_.emplace(variables_[i], i).second)
        throw std::invalid_argument("duplicate variable name " + variables_[i]);
    }
  }

  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t num_vars() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<LinearInequality>& rows() const { return rows_; }
  const LinearInequality& row(std::size_t i) const { return rows_.at(i); }

  std::size_t var_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown variable " + name);
    return it->second;
  }

  void add(std::vector<Rational> coeffs, Rational rhs) {
    if (coeffs.size() != variables_.size())
      throw std::invalid_argument("coefficient count does not match variable count");
    rows_.push_back({std::move(coeffs), std::move(rhs)});
  }

  /// Adds a row given as sparse (variable name, coefficient) terms.
  void add_terms(const std::vector<std::pair<std::string, Rational>>& terms, Rational rhs) {
    std::vector<Rational> coeffs(variables_.size(), Rational(0));
    for (const auto& [name, c] : terms) coeffs[var_index(name)] += c;
    add(std::move(coeffs), std::move(rhs));
  }

  /// Adds var >= 0 for every variable.
  void add_nonnegativity() {
    for (std::size_t j = 0; j < variables_.size(); ++j) {
      std::vector<Rational> coeffs(variables_.size(), Rational(0));
      coeffs[j] = rat(-1);
      add(std::move(coeffs), Rational(0));
    }
  }

  bool contains(const std::vector<Rational>& point) const {
    if (point.size() != variables_.size())
      throw std::invalid_argument("point dimension does not match variable count");
    for (const auto& r : rows_) {
      Rational lhs(0);
      for (std::size_t j = 0; j < point.size(); ++j) lhs += r.coeffs[j] * point[j];
      if (lhs > r.rhs) return false;
    }
    return true;
  }

  /// Scales each row by a positive rational so its coefficients become
  /// coprime integers (canonical form for comparisons). All-zero rows keep
  /// only the sign of rhs: 0 <= 0 or 0 <= -1.
  void normalize_rows() {
    for (auto& r : rows_) normalize_row(r);
  }

  /// Drops duplicate rows and rows dominated by another row with identical
  /// normalized coefficients and smaller-or-equal rhs. Also folds trivially
  /// true all-zero rows, keeping at most one infeasibility marker.
  void dedupe_rows() {
    normalize_rows();
    std::map<std::vector<Rational>, Rational> best;
    bool infeasible = false;
    std::vector<LinearInequality> kept;
    for (auto& r : rows_) {
      if (is_zero_row(r)) {
        if (r.rhs < 0) infeasible = true;
        continue;
      }
      auto it = best.find(r.coeffs);
      if (it == best.end())
        best.emplace(r.coeffs, r.rhs);
      else if (r.rhs < it->second)
        it->second = r.rhs;
    }
    if (infeasible) {
      rows_.clear();
      mark_infeasible();
      return;
    }
    for (auto& [coeffs, rhs] : best) kept.push_back({coeffs, rhs});
    rows_ = std::move(kept);
  }

  /// Replaces all rows with the canonical unsatisfiable row 0 <= -1.
  void mark_infeasible() {
    rows_.clear();
    rows_.push_back({std::vector<Rational>(variables_.size(), Rational(0)), rat(-1)});
  }

  bool is_infeasible_marker() const {
    return rows_.size() == 1 && is_zero_row(rows_[0]) && rows_[0].rhs < 0;
  }

  static bool is_zero_row(const LinearInequality& r) {
    return std::all_of(r.coeffs.begin(), r.coeffs.end(),
                       [](const Rational& c) { return sgn(c) == 0; });
  }

  /// Text form: a comment header fixing the variable order, then one row per
  /// line written as "c1*v1 + c2*v2 + ... <= rhs" with exact rationals.
  std::string to_text() const {
    std::ostringstream out;
    out << "# variables:";
    for (const auto& v : variables_) out << ' ' << v;
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t j = 0; j < variables_.size(); ++j) {
        if (j > 0) out << " + ";
        out << to_string(r.coeffs[j]) << '*' << variables_[j];
      }
      out << " <= " << to_string(r.rhs) << '\n';
    }
    return out.str();
  }

  static HalfspaceSystem from_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty halfspace text");
    std::istringstream head(line);
    std::string tok;
    head >> tok;
    if (tok != "#") throw std::invalid_argument("missing variable header line");
    head >> tok;
    if (tok != "variables:") throw std::invalid_argument("missing variable header line");
    std::vector<std::string> vars;
    while (head >> tok) vars.push_back(tok);
    HalfspaceSystem sys(vars);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      sys.add_text_row(line);
    }
    return sys;
  }

  static HalfspaceSystem from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
  }

 private:
  void add_text_row(const std::string& line) {
    std::istringstream in(line);
    std::vector<Rational> coeffs(variables_.size(), Rational(0));
    std::string tok;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
      if (j > 0) {
        if (!(in >> tok) || tok != "+") throw std::invalid_argument("bad row: " + line);
      }
      if (!(in >> tok)) throw std::invalid_argument("bad row: " + line);
      auto star = tok.find('*');
      if (star == std::string::npos) throw std::invalid_argument("bad term: " + tok);
      if (tok.substr(star + 1) != variables_[j])
        throw std::invalid_argument("unexpected variable in term: " + tok);
      coeffs[j] = parse_rational(tok.substr(0, star));
    }
    if (!(in >> tok) || tok != "<=") throw std::invalid_argument("bad row: " + line);
    if (!(in >> tok)) throw std::invalid_argument("bad row: " + line);
    Rational rhs = parse_rational(tok);
    if (in >> tok) throw std::invalid_argument("trailing content: " + line);
    add(std::move(coeffs), std::move(rhs));
  }

  static void normalize_row(LinearInequality& r) {
    mpz_class den_lcm(1);
    for (const auto& c : r.coeffs) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.rhs.get_den().get_mpz_t());
    Rational scale(den_lcm);
    mpz_class g(0);
    for (auto& c : r.coeffs) {
      c *= scale;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
    }
    r.rhs *= scale;
    if (g == 0) {
      // All-zero coefficients: keep only the sign of rhs.
      if (r.rhs > 0)
        r.rhs = 0;
      else if (r.rhs < 0)
        r.rhs = -1;
      return;
    }
    Rational shrink(g);
    for (auto& c : r.coeffs) c /= shrink;
    r.rhs /= shrink;
  }

  std::vector<std::string> variables_;
  std::map<std::string, std::size_t> index_;
  std::vector<LinearInequality> rows_;
};

inline std::ostream& operator<<(std::ostream& out, const HalfspaceSystem& sys) {
  return out << sys.to_text();
}

}  // namespace threewc::poly
