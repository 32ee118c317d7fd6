#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "slopeforge/error.hpp"

namespace slopeforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline Int ipow(const Int& base, long e) {
  Int r = 1, b = base;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    if (k > 1) b *= b;
  }
  return r;
}

inline Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// p-adic valuation of a nonzero integer.
inline long vp_int(Int x, const Int& p) {
  if (x == 0) fail(errc::domain_mismatch, "vp of zero");
  long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

inline long vp_rat(const Rat& x, const Int& p) {
  if (x == 0) fail(errc::domain_mismatch, "vp of zero");
  return vp_int(rat_num(x), p) - vp_int(rat_den(x), p);
}

// p^e as a rational, e possibly negative.
inline Rat rat_p_pow(const Int& p, long e) {
  if (e >= 0) return Rat(ipow(p, e));
  return Rat(1, ipow(p, -e));
}

}  // namespace slopeforge
