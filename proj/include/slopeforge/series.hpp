#pragma once

#include <vector>

#include "slopeforge/error.hpp"
#include "slopeforge/fp_poly.hpp"
#include "slopeforge/rational.hpp"

namespace slopeforge {

// Truncated coefficient rings: F_p[u]/u^N, (Z/p^n)[u]/u^N, and exact rational
// polynomials of bounded u-degree with a designated prime.
struct RingSpec {
  enum class Kind { fp_series, zpn_series, rational_poly };
  Kind kind = Kind::fp_series;
  long p = 2;
  long n = 1;    // p-power exponent for zpn_series
  long N_u = 8;  // u-truncation (fp/zpn) or degree bound D_u (rational_poly)

  Int modulus() const { return ipow(Int(p), kind == Kind::zpn_series ? n : 1); }

  friend bool operator==(const RingSpec& a, const RingSpec& b) {
    return a.kind == b.kind && a.p == b.p && a.n == b.n && a.N_u == b.N_u;
  }
};

// Element of a truncated modular series ring; coefficients are canonical
// residues mod p^n, indexed by u-exponent, length exactly N_u.  The
// effective-precision flag records that a Frobenius application pushed
// nonzero digits past the truncation.
struct SeriesElement {
  RingSpec ring;
  std::vector<Int> c;
  bool precision_loss = false;
};

inline void series_check_ring(const SeriesElement& a, const SeriesElement& b) {
  if (!(a.ring == b.ring)) fail(errc::ring_mismatch, "series operands in different rings");
}

inline SeriesElement series_make(const RingSpec& ring, std::vector<Int> cs) {
  if (ring.kind == RingSpec::Kind::rational_poly)
    fail(errc::ring_mismatch, "series elements live in modular rings");
  Int m = ring.modulus();
  cs.resize(ring.N_u, Int(0));
  for (auto& x : cs) {
    x %= m;
    if (x < 0) x += m;
  }
  return SeriesElement{ring, std::move(cs), false};
}

inline SeriesElement series_zero(const RingSpec& ring) { return series_make(ring, {}); }

inline SeriesElement series_add(const SeriesElement& a, const SeriesElement& b) {
  series_check_ring(a, b);
  SeriesElement r = a;
  Int m = a.ring.modulus();
  for (long i = 0; i < a.ring.N_u; ++i) r.c[i] = (a.c[i] + b.c[i]) % m;
  r.precision_loss = a.precision_loss || b.precision_loss;
  return r;
}

inline SeriesElement series_mul(const SeriesElement& a, const SeriesElement& b) {
  series_check_ring(a, b);
  SeriesElement r = series_zero(a.ring);
  Int m = a.ring.modulus();
  for (long i = 0; i < a.ring.N_u; ++i) {
    if (a.c[i] == 0) continue;
    for (long j = 0; j + i < a.ring.N_u; ++j)
      r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % m;
  }
  r.precision_loss = a.precision_loss || b.precision_loss;
  return r;
}

// u -> u^p; the coefficient action is trivial (q = p, and W(F_p) = Z_p is
// fixed by sigma).  Digits pushed past u^N_u are dropped and flagged.
inline SeriesElement series_frobenius(const SeriesElement& a) {
  SeriesElement r = series_zero(a.ring);
  r.precision_loss = a.precision_loss;
  for (long i = 0; i < a.ring.N_u; ++i) {
    if (a.c[i] == 0) continue;
    long e = i * a.ring.p;
    if (e >= a.ring.N_u)
      r.precision_loss = true;
    else
      r.c[e] = a.c[i];
  }
  return r;
}

inline bool series_eq(const SeriesElement& a, const SeriesElement& b) {
  return a.ring == b.ring && a.c == b.c;
}

inline FpPoly series_to_fp(const SeriesElement& a) {
  if (a.ring.kind != RingSpec::Kind::fp_series)
    fail(errc::ring_mismatch, "expected an F_p series");
  std::vector<long> cs;
  cs.reserve(a.c.size());
  for (const auto& x : a.c) cs.push_back(static_cast<long>(x));
  return fp_make(a.ring.p, std::move(cs));
}

}  // namespace slopeforge
