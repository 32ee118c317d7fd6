#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "slopeforge/rational.hpp"

namespace slopeforge {

// Dense polynomials over Q, ascending exponent order, no trailing zeros.
using QPoly = std::vector<Rat>;

inline void q_trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline QPoly q_poly(std::vector<Rat> cs) {
  q_trim(cs);
  return cs;
}

inline bool q_is_zero(const QPoly& f) { return f.empty(); }
inline long q_deg(const QPoly& f) { return static_cast<long>(f.size()) - 1; }

inline QPoly q_zero() { return {}; }
inline QPoly q_one() { return {Rat(1)}; }
inline QPoly q_const(const Rat& x) { return x == 0 ? QPoly{} : QPoly{x}; }
inline QPoly q_monomial(long e, const Rat& coef = Rat(1)) {
  QPoly f(e + 1, Rat(0));
  f[e] = coef;
  q_trim(f);
  return f;
}

inline QPoly q_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  q_trim(r);
  return r;
}

inline QPoly q_neg(const QPoly& a) {
  QPoly r = a;
  for (auto& x : r) x = -x;
  return r;
}

inline QPoly q_sub(const QPoly& a, const QPoly& b) { return q_add(a, q_neg(b)); }

inline QPoly q_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  q_trim(r);
  return r;
}

inline QPoly q_scale(const QPoly& a, const Rat& s) {
  if (s == 0) return {};
  QPoly r = a;
  for (auto& x : r) x *= s;
  return r;
}

// f = q*E + r, deg r < deg E; E need not be monic here, leading coeff inverted.
inline std::pair<QPoly, QPoly> q_divmod(const QPoly& f, const QPoly& E) {
  if (E.empty()) fail(errc::domain_mismatch, "division by zero polynomial");
  QPoly q, r = f;
  q.assign(f.size() > E.size() ? f.size() - E.size() + 1 : 1, Rat(0));
  Rat lead = E.back();
  while (!r.empty() && r.size() >= E.size()) {
    long e = static_cast<long>(r.size() - E.size());
    Rat s = r.back() / lead;
    q[e] += s;
    QPoly t = q_mul(q_monomial(e, s), E);
    r = q_sub(r, t);
  }
  q_trim(q);
  return {q, r};
}

inline QPoly q_gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = q_divmod(a, b).second;
    a = b;
    b = r;
  }
  if (!a.empty()) {
    Rat inv = Rat(1) / a.back();
    for (auto& x : a) x *= inv;
  }
  return a;
}

// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic (or zero).
inline std::tuple<QPoly, QPoly, QPoly> q_ext_gcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b, s0 = q_one(), s1{}, t0{}, t1 = q_one();
  while (!r1.empty()) {
    auto [q, r] = q_divmod(r0, r1);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, q_sub(s0, q_mul(q, s1)));
    t0 = std::exchange(t1, q_sub(t0, q_mul(q, t1)));
  }
  if (!r0.empty()) {
    Rat inv = Rat(1) / r0.back();
    r0 = q_scale(r0, inv);
    s0 = q_scale(s0, inv);
    t0 = q_scale(t0, inv);
  }
  return {r0, s0, t0};
}

inline Rat q_eval(const QPoly& f, const Rat& x) {
  Rat r = 0;
  for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

// Gauss valuation: min p-adic valuation over the coefficients.
inline std::optional<long> q_val_p(const QPoly& f, const Int& p) {
  std::optional<long> v;
  for (const auto& c : f)
    if (c != 0) {
      long w = vp_rat(c, p);
      if (!v || w < *v) v = w;
    }
  return v;
}

// E-adic valuation via iterated exact division; nullopt for zero.
inline std::optional<long> q_val_E(QPoly f, const QPoly& E) {
  if (f.empty()) return std::nullopt;
  long v = 0;
  for (;;) {
    auto [q, r] = q_divmod(f, E);
    if (!r.empty()) return v;
    ++v;
    f = q;
    if (f.empty()) fail(errc::domain_mismatch, "val_E of zero quotient");
  }
}

inline QPoly q_frobenius_u(const QPoly& f, long p) {
  if (f.empty()) return {};
  QPoly r(f.size() * p, Rat(0));
  for (size_t i = 0; i < f.size(); ++i) r[i * p] = f[i];
  q_trim(r);
  return r;
}

// Rational functions over Q, reduced, monic denominator.
struct QRatFun {
  QPoly num, den;

  bool is_zero() const { return num.empty(); }
};

inline QRatFun qrf_reduce(QPoly n, QPoly d) {
  if (d.empty()) fail(errc::domain_mismatch, "zero denominator");
  if (n.empty()) return QRatFun{{}, q_one()};
  QPoly g = q_gcd(n, d);
  n = q_divmod(n, g).first;
  d = q_divmod(d, g).first;
  Rat inv = Rat(1) / d.back();
  for (auto& x : n) x *= inv;
  for (auto& x : d) x *= inv;
  return QRatFun{n, d};
}

inline QRatFun qrf(const QPoly& n) { return QRatFun{n, q_one()}; }
inline QRatFun qrf_zero() { return QRatFun{{}, q_one()}; }
inline QRatFun qrf_one() { return QRatFun{q_one(), q_one()}; }

inline QRatFun operator+(const QRatFun& a, const QRatFun& b) {
  return qrf_reduce(q_add(q_mul(a.num, b.den), q_mul(b.num, a.den)), q_mul(a.den, b.den));
}
inline QRatFun operator-(const QRatFun& a, const QRatFun& b) {
  return qrf_reduce(q_sub(q_mul(a.num, b.den), q_mul(b.num, a.den)), q_mul(a.den, b.den));
}
inline QRatFun operator*(const QRatFun& a, const QRatFun& b) {
  return qrf_reduce(q_mul(a.num, b.num), q_mul(a.den, b.den));
}
inline QRatFun operator/(const QRatFun& a, const QRatFun& b) {
  if (b.is_zero()) fail(errc::domain_mismatch, "division by zero");
  return qrf_reduce(q_mul(a.num, b.den), q_mul(a.den, b.num));
}
inline bool operator==(const QRatFun& a, const QRatFun& b) {
  return a.num == b.num && a.den == b.den;
}

inline std::optional<long> qrf_val_p(const QRatFun& x, const Int& p) {
  auto n = q_val_p(x.num, p);
  if (!n) return std::nullopt;
  return *n - *q_val_p(x.den, p);
}

inline std::optional<long> qrf_val_E(const QRatFun& x, const QPoly& E) {
  auto n = q_val_E(x.num, E);
  if (!n) return std::nullopt;
  return *n - *q_val_E(x.den, E);
}

// Eisenstein polynomial for the prime p: monic, lower coefficients divisible
// by p, constant term of p-valuation exactly one.
struct EisensteinPoly {
  QPoly poly;
  Int p;

  long e() const { return q_deg(poly); }
};

inline EisensteinPoly make_eisenstein(QPoly f, const Int& p) {
  if (f.size() < 2 || f.back() != 1) fail(errc::domain_mismatch, "Eisenstein: not monic of degree >= 1");
  for (size_t i = 0; i + 1 < f.size(); ++i) {
    if (f[i] != 0 && vp_rat(f[i], p) < 1)
      fail(errc::domain_mismatch, "Eisenstein: lower coefficient not divisible by p");
  }
  if (f[0] == 0 || vp_rat(f[0], p) != 1)
    fail(errc::domain_mismatch, "Eisenstein: constant term valuation != 1");
  return EisensteinPoly{std::move(f), p};
}

}  // namespace slopeforge
