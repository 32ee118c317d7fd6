#pragma once

#include <optional>
#include <vector>

#include "slopeforge/fp_poly.hpp"
#include "slopeforge/rat_poly.hpp"

namespace slopeforge {

template <class K>
using Mat = std::vector<std::vector<K>>;

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline bool is_zero_elem(const Rat& x) { return x == 0; }
inline FpRatFun zero_like(const FpRatFun& x) { return fprf_zero(x.p()); }
inline FpRatFun one_like(const FpRatFun& x) { return fprf_one(x.p()); }
inline bool is_zero_elem(const FpRatFun& x) { return x.is_zero(); }
inline QRatFun zero_like(const QRatFun&) { return qrf_zero(); }
inline QRatFun one_like(const QRatFun&) { return qrf_one(); }
inline bool is_zero_elem(const QRatFun& x) { return x.is_zero(); }

template <class K>
Mat<K> mat_identity(size_t n, const K& model) {
  Mat<K> m(n, std::vector<K>(n, zero_like(model)));
  for (size_t i = 0; i < n; ++i) m[i][i] = one_like(model);
  return m;
}

template <class K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b) {
  size_t m = a.size(), k = b.size(), n = b.empty() ? 0 : b[0].size();
  Mat<K> r(m, std::vector<K>(n, zero_like(a[0][0])));
  for (size_t i = 0; i < m; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (is_zero_elem(a[i][l])) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] = r[i][j] + a[i][l] * b[l][j];
    }
  return r;
}

// Smith normal form over a discrete valuation ring, computed by exact
// elimination in the valued fraction field.  Pivot: minimal valuation, ties
// broken by lowest (row, column).  left * A * right is diagonal with
// uniformizer-power diagonal; transforms are unimodular over the valuation
// ring.
template <class K>
struct SnfResult {
  std::vector<long> diag;    // weakly increasing valuations
  std::vector<bool> capped;  // true: only known to be >= the truncation
  Mat<K> left, right;
};

template <class K, class ValFn, class UnifFn>
SnfResult<K> snf_valued(Mat<K> a, ValFn val, UnifFn unif_pow, std::optional<long> truncation) {
  size_t m = a.size(), n = a.empty() ? 0 : a[0].size();
  if (m == 0 || n == 0) fail(errc::domain_mismatch, "snf of empty matrix");
  const K model = a[0][0];
  SnfResult<K> res;
  res.left = mat_identity<K>(m, model);
  res.right = mat_identity<K>(n, model);
  size_t steps = std::min(m, n);
  for (size_t k = 0; k < steps; ++k) {
    std::optional<long> best;
    size_t bi = k, bj = k;
    for (size_t i = k; i < m; ++i)
      for (size_t j = k; j < n; ++j) {
        auto v = val(a[i][j]);
        if (v && (!best || *v < *best)) {
          best = *v;
          bi = i;
          bj = j;
        }
      }
    if (!best) fail(errc::not_full_rank, "matrix singular over the fraction field");
    if (truncation && *best >= *truncation) {
      for (size_t l = k; l < steps; ++l) {
        res.diag.push_back(*truncation);
        res.capped.push_back(true);
      }
      return res;
    }
    std::swap(a[k], a[bi]);
    std::swap(res.left[k], res.left[bi]);
    if (bj != k) {
      for (size_t i = 0; i < m; ++i) std::swap(a[i][k], a[i][bj]);
      for (size_t i = 0; i < n; ++i) std::swap(res.right[i][k], res.right[i][bj]);
    }
    // Normalize the pivot to a pure uniformizer power (unit row scaling).
    K unit = a[k][k] / unif_pow(*best);
    for (size_t j = 0; j < n; ++j) a[k][j] = a[k][j] / unit;
    for (size_t j = 0; j < m; ++j) res.left[k][j] = res.left[k][j] / unit;
    for (size_t i = k + 1; i < m; ++i) {
      if (is_zero_elem(a[i][k])) continue;
      K f = a[i][k] / a[k][k];
      for (size_t j = 0; j < n; ++j) a[i][j] = a[i][j] - f * a[k][j];
      for (size_t j = 0; j < m; ++j) res.left[i][j] = res.left[i][j] - f * res.left[k][j];
    }
    for (size_t j = k + 1; j < n; ++j) {
      if (is_zero_elem(a[k][j])) continue;
      K f = a[k][j] / a[k][k];
      for (size_t i = 0; i < m; ++i) a[i][j] = a[i][j] - f * a[i][k];
      for (size_t i = 0; i < n; ++i) res.right[i][j] = res.right[i][j] - f * res.right[i][k];
    }
    res.diag.push_back(*best);
    res.capped.push_back(false);
  }
  return res;
}

// u-adic context over F_p(u); truncation N_u caps reported valuations.
inline SnfResult<FpRatFun> snf_dvr_u(const Mat<FpRatFun>& a, long p,
                                     std::optional<long> truncation = std::nullopt) {
  return snf_valued(
      a, [](const FpRatFun& x) { return fprf_val_u(x); },
      [p](long v) {
        return v >= 0 ? fprf(fp_monomial(p, v)) : fprf_reduce(fp_one(p), fp_monomial(p, -v));
      },
      truncation);
}

// p-adic (Gauss) context over Q(u): valuation = min p-adic valuation of
// coefficients, the localization of Z_p[[u]] at (p).
inline SnfResult<QRatFun> snf_dvr_p(const Mat<QRatFun>& a, const Int& p) {
  return snf_valued(
      a, [&p](const QRatFun& x) { return qrf_val_p(x, p); },
      [&p](long v) { return qrf(q_const(rat_p_pow(p, v))); }, std::nullopt);
}

// E-adic context over Q(u) for an Eisenstein (hence irreducible) E.
inline SnfResult<QRatFun> snf_dvr_E(const Mat<QRatFun>& a, const QPoly& E) {
  return snf_valued(
      a, [&E](const QRatFun& x) { return qrf_val_E(x, E); },
      [&E](long v) {
        QPoly Ev = q_one();
        for (long i = 0; i < std::abs(v); ++i) Ev = q_mul(Ev, E);
        return v >= 0 ? qrf(Ev) : qrf_reduce(q_one(), Ev);
      },
      std::nullopt);
}

// Integer Smith normal form with p-adic valuations capped at n, supporting
// cokernel cardinalities over Z/p^n.  The diagonal has one entry per row;
// missing invariant factors count as capped (valuation n).
struct IntSnfResult {
  std::vector<long> diag;  // capped valuations, weakly increasing
  long coker_log_p = 0;    // log_p |coker(A mod p^n)|
};

inline IntSnfResult snf_integer_mod(Mat<Int> a, const Int& p, long n) {
  size_t m = a.size(), cols = a.empty() ? 0 : a[0].size();
  IntSnfResult res;
  size_t steps = std::min(m, cols);
  std::vector<long> vals;
  for (size_t k = 0; k < steps; ++k) {
    // Euclidean elimination: reduce until a[k][k] divides its row and column.
    for (;;) {
      Int best = 0;
      size_t bi = k, bj = k;
      for (size_t i = k; i < m; ++i)
        for (size_t j = k; j < cols; ++j)
          if (a[i][j] != 0 && (best == 0 || abs(a[i][j]) < abs(best))) {
            best = a[i][j];
            bi = i;
            bj = j;
          }
      if (best == 0) break;
      std::swap(a[k], a[bi]);
      for (size_t i = k; i < m; ++i) std::swap(a[i][k], a[i][bj]);
      bool again = false;
      for (size_t i = k + 1; i < m; ++i)
        if (a[i][k] != 0) {
          Int q = a[i][k] / a[k][k];
          for (size_t j = k; j < cols; ++j) a[i][j] -= q * a[k][j];
          if (a[i][k] != 0) again = true;
        }
      for (size_t j = k + 1; j < cols; ++j)
        if (a[k][j] != 0) {
          Int q = a[k][j] / a[k][k];
          for (size_t i = k; i < m; ++i) a[i][j] -= q * a[i][k];
          if (a[k][j] != 0) again = true;
        }
      if (!again) break;
    }
    if (a[k][k] == 0) break;
    vals.push_back(std::min<long>(vp_int(a[k][k], p), n));
  }
  std::sort(vals.begin(), vals.end());
  for (size_t i = 0; i < m; ++i) {
    long v = i < vals.size() ? vals[i] : n;
    res.diag.push_back(v);
    res.coker_log_p += v;
  }
  return res;
}

}  // namespace slopeforge
