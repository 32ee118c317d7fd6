#pragma once

#include <cctype>
#include <string>

#include "slopeforge/fp_poly.hpp"
#include "slopeforge/rat_poly.hpp"

namespace slopeforge {

// Parses the polynomial literal grammar: integer or a/b rational
// coefficients, variable u, operators + - * ^, whitespace insignificant.
// Examples: "1 + 3*u^2 - 1/2*u^5", "u^3", "-2", "u^-1" (Laurent exponents
// are accepted by parse_laurent only).
namespace detail {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void error(const std::string& msg) {
    fail(errc::parse_error, msg + " at column " + std::to_string(i + 1) + " in \"" + s + "\"");
  }
};

inline Int parse_uint(Cursor& c) {
  c.skip_ws();
  if (c.i >= c.s.size() || !std::isdigit(static_cast<unsigned char>(c.s[c.i])))
    c.error("expected digit");
  Int v = 0;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
    v = v * 10 + (c.s[c.i] - '0');
    ++c.i;
  }
  return v;
}

inline long parse_exponent(Cursor& c, bool allow_negative) {
  c.skip_ws();
  bool neg = false;
  if (c.peek() == '-') {
    if (!allow_negative) c.error("negative exponent not allowed here");
    neg = true;
    ++c.i;
  }
  Int e = parse_uint(c);
  if (e > 1000000) c.error("exponent too large");
  long v = static_cast<long>(e);
  return neg ? -v : v;
}

}  // namespace detail

// Laurent polynomial term list: pairs (exponent, rational coefficient).
inline std::vector<std::pair<long, Rat>> parse_laurent_terms(const std::string& text) {
  detail::Cursor c{text};
  std::vector<std::pair<long, Rat>> terms;
  bool first = true;
  while (!c.done()) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+' || ch == '-') {
      sign = ch == '-' ? -1 : 1;
      ++c.i;
    } else if (!first) {
      c.error("expected '+' or '-'");
    }
    first = false;

    Rat coef(1);
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      Int num = detail::parse_uint(c);
      Int den = 1;
      if (c.peek() == '/') {
        ++c.i;
        den = detail::parse_uint(c);
        if (den == 0) c.error("zero denominator");
      }
      coef = Rat(num, den);
      have_coef = true;
    }

    long expo = 0;
    bool have_u = false;
    if (c.peek() == '*' || c.peek() == 'u') {
      if (c.peek() == '*') {
        if (!have_coef) c.error("unexpected '*'");
        ++c.i;
        if (c.peek() != 'u') c.error("expected 'u'");
      }
      ++c.i;  // consume 'u'
      have_u = true;
      expo = 1;
      if (c.peek() == '^') {
        ++c.i;
        if (c.peek() == '^') c.error("unexpected '^'");
        expo = detail::parse_exponent(c, true);
      }
    }
    if (!have_coef && !have_u) c.error("expected term");
    terms.emplace_back(expo, Rat(sign) * coef);
  }
  return terms;
}

inline QPoly parse_poly(const std::string& text) {
  QPoly f;
  for (const auto& [e, coef] : parse_laurent_terms(text)) {
    if (e < 0)
      fail(errc::parse_error, "negative exponent in polynomial literal \"" + text + "\"");
    f = q_add(f, q_monomial(e, coef));
  }
  return f;
}

// Laurent literal as a rational function over Q: numerator / u^k.
inline QRatFun parse_laurent_q(const std::string& text) {
  auto terms = parse_laurent_terms(text);
  long shift = 0;
  for (const auto& [e, coef] : terms) shift = std::min(shift, e);
  QPoly num;
  for (const auto& [e, coef] : terms) num = q_add(num, q_monomial(e - shift, coef));
  return qrf_reduce(num, q_monomial(-shift));
}

// Laurent literal over F_p: numerator / u^k with integer coefficients mod p.
inline FpRatFun parse_laurent_fp(const std::string& text, long p) {
  auto terms = parse_laurent_terms(text);
  long shift = 0;
  for (const auto& [e, coef] : terms) shift = std::min(shift, e);
  FpPoly num = fp_zero(p);
  for (const auto& [e, coef] : terms) {
    if (rat_den(coef) % p == 0)
      fail(errc::parse_error, "coefficient denominator divisible by p in \"" + text + "\"");
    long c = static_cast<long>(rat_num(coef) % p) * fp_inv_scalar(static_cast<long>(rat_den(coef) % p), p);
    num = fp_add(num, fp_monomial(p, e - shift, fp_mod(c, p)));
  }
  return fprf_reduce(num, fp_monomial(p, -shift));
}

}  // namespace slopeforge
