#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace threewc::poly {

// Exact rational scalar. GMP keeps values canonical (den > 0, gcd == 1)
// through arithmetic; construction goes through rat()/parse_rational so the
// invariant also holds for hand-built values.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

/// Floor of an exact rational, as a rational.
inline Rational rational_floor(const Rational& q) {
  Rational r;
  mpz_fdiv_q(r.get_num_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Accepts "p", "p/q", and an optional leading sign; anything else (notably
// decimal strings such as "0.5") is rejected so callers stay exact.
inline Rational parse_rational(std::string_view text) {
  const auto fail = [&] {
    throw std::invalid_argument("expected exact rational \"p\" or \"p/q\", got \"" +
                                std::string(text) + "\"");
  };
  if (text.empty()) fail();
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') ++pos;
  std::size_t digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    ++pos;
    ++digits;
  }
  if (digits == 0) fail();
  std::string den = "1";
  if (pos < text.size()) {
    if (text[pos] != '/') fail();
    ++pos;
    if (pos == text.size()) fail();
    std::size_t den_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) fail();
    den = std::string(text.substr(den_start));
  }
  std::string_view num_view = text.substr(0, text.find('/'));
  if (num_view.front() == '+') num_view.remove_prefix(1);  // GMP rejects a leading '+'
  const std::string num(num_view);
  Rational q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator");
  q.canonicalize();
  return q;
}

}  // namespace threewc::poly
