#ifndef BUDGET_FAIR_NUM_HPP
#define BUDGET_FAIR_NUM_HPP

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "budget_fair/errors.hpp"

namespace budget_fair {

// Exact rational. mpq_class keeps values canonical (reduced, positive
// denominator) as long as every constructor path goes through canonicalize().
using Num = mpq_class;

inline Num make_num(long numerator, long denominator = 1) {
  if (denominator == 0) throw ParseError("zero denominator");
  Num r(numerator, denominator);
  r.canonicalize();
  return r;
}

/// Parses "p/q", integers, and finite decimals with an optional exponent
/// ("-1.25", "3e-2") into an exact rational.
inline Num parse_num(std::string_view text) {
  auto fail = [&](const char* why) -> ParseError {
    return ParseError("invalid number '" + std::string(text) + "': " + why);
  };
  if (text.empty()) throw fail("empty");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto is_int = [](std::string_view s) {
      std::size_t k = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
      if (k == s.size()) return false;
      for (; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
      return true;
    };
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw fail("malformed fraction");
    if (!num.empty() && num[0] == '+') num.remove_prefix(1);
    if (!den.empty() && den[0] == '+') den.remove_prefix(1);
    mpz_class p(std::string(num), 10);
    mpz_class q(std::string(den), 10);
    if (q == 0) throw fail("zero denominator");
    Num r(p, q);
    r.canonicalize();
    return r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;  // value = digits * 10^scale
  bool seen_digit = false;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    digits.push_back(text[pos]);
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      digits.push_back(text[pos]);
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw fail("no digits");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::string_view exp = text.substr(pos);
    if (exp.empty()) throw fail("empty exponent");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(std::string(exp), &used);
    } catch (const std::exception&) {
      throw fail("bad exponent");
    }
    if (used != exp.size()) throw fail("trailing characters");
    if (e > 4096 || e < -4096) throw fail("exponent out of range");
    scale += e;
    pos = text.size();
  }
  if (pos != text.size()) throw fail("trailing characters");

  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Num r = scale < 0 ? Num(mantissa, power) : Num(mantissa * power, 1);
  r.canonicalize();
  return r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Num& x) { return x.get_str(10); }

inline mpz_class floor_of(const Num& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

/// Largest r = p / 10^digits with r^4 <= x, for x >= 0.
inline Num fourth_root_lower_bound(const Num& x, unsigned digits = 6) {
  if (x < 0) throw PreconditionError("fourth root of a negative number");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  // floor((x * scale^4)^(1/4)) == floor of the 4th root of floor(x * scale^4)
  mpz_class s4 = scale * scale * scale * scale;
  Num scaled = x * Num(s4);
  mpz_class p;
  mpz_root(p.get_mpz_t(), floor_of(scaled).get_mpz_t(), 4);
  Num r(p, scale);
  r.canonicalize();
  return r;
}

inline Num pow_int(const Num& x, unsigned e) {
  Num r = 1;
  for (unsigned k = 0; k < e; ++k) r *= x;
  return r;
}

// An approximation factor: exact rational, or unbounded when no pair of agents
// constrains it.
class Alpha {
 public:
  Alpha() = default;  // infinite
  explicit Alpha(Num value) : value_(std::move(value)) {}

  static Alpha infinite() { return Alpha(); }

  bool is_infinite() const { return !value_.has_value(); }
  const Num& value() const {
    if (!value_) throw PreconditionError("alpha is infinite");
    return *value_;
  }

  // inf >= anything
  bool at_least(const Num& bound) const { return is_infinite() || *value_ >= bound; }

  std::string str() const { return is_infinite() ? std::string("inf") : to_string(*value_); }

  friend bool operator==(const Alpha& a, const Alpha& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
  }
  friend bool operator<(const Alpha& a, const Alpha& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.value_ < *b.value_;
  }

 private:
  std::optional<Num> value_;
};

}  // namespace budget_fair

#endif  // BUDGET_FAIR_NUM_HPP
