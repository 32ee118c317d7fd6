#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "slopeforge/error.hpp"

namespace slopeforge {

// Dense polynomials over F_p for small primes p, coefficients in [0, p),
// ascending exponent order, no trailing zeros.
struct FpPoly {
  long p = 2;
  std::vector<long> c;

  bool is_zero() const { return c.empty(); }
  long deg() const { return static_cast<long>(c.size()) - 1; }
};

inline long fp_mod(long x, long p) {
  long r = x % p;
  return r < 0 ? r + p : r;
}

inline void fp_trim(FpPoly& f) {
  while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
}

inline FpPoly fp_make(long p, std::vector<long> cs) {
  FpPoly f{p, std::move(cs)};
  for (auto& x : f.c) x = fp_mod(x, p);
  fp_trim(f);
  return f;
}

inline FpPoly fp_zero(long p) { return FpPoly{p, {}}; }
inline FpPoly fp_one(long p) { return FpPoly{p, {1}}; }
inline FpPoly fp_monomial(long p, long e, long coef = 1) {
  std::vector<long> cs(e + 1, 0);
  cs[e] = coef;
  return fp_make(p, std::move(cs));
}

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
  FpPoly r{a.p, {}};
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = fp_mod(r.c[i] + b.c[i], a.p);
  fp_trim(r);
  return r;
}

inline FpPoly fp_neg(const FpPoly& a) {
  FpPoly r = a;
  for (auto& x : r.c) x = fp_mod(-x, a.p);
  return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b) { return fp_add(a, fp_neg(b)); }

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return fp_zero(a.p);
  FpPoly r{a.p, std::vector<long>(a.c.size() + b.c.size() - 1, 0)};
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = fp_mod(r.c[i + j] + a.c[i] * b.c[j], a.p);
  fp_trim(r);
  return r;
}

inline FpPoly fp_scale(const FpPoly& a, long s) {
  FpPoly r = a;
  for (auto& x : r.c) x = fp_mod(x * s, a.p);
  fp_trim(r);
  return r;
}

inline long fp_inv_scalar(long a, long p) {
  a = fp_mod(a, p);
  if (a == 0) fail(errc::domain_mismatch, "inverse of zero in F_p");
  long t = 0, newt = 1, r = p, newr = a;
  while (newr != 0) {
    long q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  return fp_mod(t, p);
}

// f = q*g + r with deg r < deg g.
inline std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& f, const FpPoly& g) {
  if (g.is_zero()) fail(errc::domain_mismatch, "division by zero polynomial");
  FpPoly q = fp_zero(f.p), r = f;
  long ginv = fp_inv_scalar(g.c.back(), f.p);
  while (!r.is_zero() && r.deg() >= g.deg()) {
    long e = r.deg() - g.deg();
    long s = fp_mod(r.c.back() * ginv, f.p);
    FpPoly t = fp_monomial(f.p, e, s);
    q = fp_add(q, t);
    r = fp_sub(r, fp_mul(t, g));
  }
  return {q, r};
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = fp_divmod(a, b).second;
    a = b;
    b = r;
  }
  if (!a.is_zero()) a = fp_scale(a, fp_inv_scalar(a.c.back(), a.p));
  return a;
}

// Lowest nonzero exponent; nullopt for the zero polynomial.
inline std::optional<long> fp_low(const FpPoly& f) {
  for (size_t i = 0; i < f.c.size(); ++i)
    if (f.c[i] != 0) return static_cast<long>(i);
  return std::nullopt;
}

// u ^ p substitution (coefficient Frobenius is trivial on F_p).
inline FpPoly fp_frobenius(const FpPoly& f) {
  FpPoly r{f.p, {}};
  if (f.is_zero()) return r;
  r.c.assign(f.c.size() * f.p, 0);
  for (size_t i = 0; i < f.c.size(); ++i) r.c[i * f.p] = f.c[i];
  fp_trim(r);
  return r;
}

inline FpPoly fp_truncate(const FpPoly& f, long N) {
  FpPoly r = f;
  if (static_cast<long>(r.c.size()) > N) r.c.resize(N);
  fp_trim(r);
  return r;
}

inline bool fp_eq(const FpPoly& a, const FpPoly& b) { return a.c == b.c; }

inline std::string fp_to_string(const FpPoly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (i == 0)
      s += std::to_string(f.c[i]);
    else if (f.c[i] == 1)
      s += "u^" + std::to_string(i);
    else
      s += std::to_string(f.c[i]) + "*u^" + std::to_string(i);
  }
  return s;
}

// Rational functions over F_p, reduced, monic denominator.  Together with the
// u-adic valuation these form the exact coefficient field for u-adic SNF.
struct FpRatFun {
  FpPoly num, den;

  long p() const { return num.p; }
  bool is_zero() const { return num.is_zero(); }
};

inline FpRatFun fprf_reduce(FpPoly n, FpPoly d) {
  if (d.is_zero()) fail(errc::domain_mismatch, "zero denominator");
  if (n.is_zero()) return FpRatFun{fp_zero(n.p), fp_one(n.p)};
  FpPoly g = fp_gcd(n, d);
  n = fp_divmod(n, g).first;
  d = fp_divmod(d, g).first;
  long s = fp_inv_scalar(d.c.back(), d.p);
  return FpRatFun{fp_scale(n, s), fp_scale(d, s)};
}

inline FpRatFun fprf(const FpPoly& n) { return FpRatFun{n, fp_one(n.p)}; }
inline FpRatFun fprf_zero(long p) { return FpRatFun{fp_zero(p), fp_one(p)}; }
inline FpRatFun fprf_one(long p) { return FpRatFun{fp_one(p), fp_one(p)}; }

inline FpRatFun operator+(const FpRatFun& a, const FpRatFun& b) {
  return fprf_reduce(fp_add(fp_mul(a.num, b.den), fp_mul(b.num, a.den)),
                     fp_mul(a.den, b.den));
}
inline FpRatFun operator-(const FpRatFun& a, const FpRatFun& b) {
  return fprf_reduce(fp_sub(fp_mul(a.num, b.den), fp_mul(b.num, a.den)),
                     fp_mul(a.den, b.den));
}
inline FpRatFun operator*(const FpRatFun& a, const FpRatFun& b) {
  return fprf_reduce(fp_mul(a.num, b.num), fp_mul(a.den, b.den));
}
inline FpRatFun operator/(const FpRatFun& a, const FpRatFun& b) {
  if (b.is_zero()) fail(errc::domain_mismatch, "division by zero");
  return fprf_reduce(fp_mul(a.num, b.den), fp_mul(a.den, b.num));
}
inline bool operator==(const FpRatFun& a, const FpRatFun& b) {
  return fp_eq(a.num, b.num) && fp_eq(a.den, b.den);
}

// u-adic valuation on F_p(u); nullopt for zero.
inline std::optional<long> fprf_val_u(const FpRatFun& x) {
  auto n = fp_low(x.num);
  if (!n) return std::nullopt;
  return *n - *fp_low(x.den);
}

// Residue at u = 0 of a valuation >= 0 element.
inline long fprf_residue(const FpRatFun& x) {
  auto v = fprf_val_u(x);
  if (v && *v < 0) fail(errc::domain_mismatch, "residue of negative valuation element");
  if (!v || *v > 0) return 0;
  long d0 = x.den.c.empty() ? 0 : x.den.c[0];
  return fp_mod(x.num.c[0] * fp_inv_scalar(d0, x.num.p), x.num.p);
}

}  // namespace slopeforge
