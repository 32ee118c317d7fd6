#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "slopeforge/error.hpp"

namespace slopeforge {

// Row-span linear algebra over Z/p^n for small p^n (fits comfortably in
// long long).  Vectors are rows; spans are row spans; maps act on the right,
// x -> x * M.  The Howell form makes row spans canonical, so span equality
// is plain vector equality.

struct ZRing {
  long p = 2;
  long n = 1;
  long long mod = 2;  // p^n
};

inline ZRing zring(long p, long n) {
  ZRing r{p, n, 1};
  for (long i = 0; i < n; ++i) r.mod *= p;
  return r;
}

inline long long zm_norm(long long x, const ZRing& R) {
  long long r = x % R.mod;
  return r < 0 ? r + R.mod : r;
}

// valuation in [0, n]; zero gets n.
inline long zm_val(long long x, const ZRing& R) {
  x = zm_norm(x, R);
  if (x == 0) return R.n;
  long v = 0;
  while (x % R.p == 0) {
    x /= R.p;
    ++v;
  }
  return v;
}

inline long long zm_pow_p(long e, const ZRing& R) {
  long long r = 1;
  for (long i = 0; i < e; ++i) r *= R.p;
  return r % R.mod == 0 ? 0 : r;
}

// inverse of a unit mod p^n.
inline long long zm_inv_unit(long long a, const ZRing& R) {
  a = zm_norm(a, R);
  if (a % R.p == 0) fail(errc::domain_mismatch, "inverse of non-unit mod p^n");
  long long t = 0, newt = 1, r = R.mod, newr = a;
  while (newr != 0) {
    long long q = r / newr;
    long long tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  return zm_norm(t, R);
}

using ZRow = std::vector<long long>;
using ZRows = std::vector<ZRow>;

inline bool zm_row_zero(const ZRow& r) {
  for (auto x : r)
    if (x != 0) return false;
  return true;
}

// Canonical Howell basis of a row span.
class ZSpan {
 public:
  ZSpan(ZRing R, size_t width) : R_(R), width_(width) {}

  const ZRing& ring() const { return R_; }
  size_t width() const { return width_; }

  void add(ZRow row) {
    for (auto& x : row) x = zm_norm(x, R_);
    insert(std::move(row));
    canonicalize();
  }

  void add_all(const ZRows& rows) {
    for (const auto& r : rows) {
      ZRow row = r;
      for (auto& x : row) x = zm_norm(x, R_);
      insert(std::move(row));
    }
    canonicalize();
  }

  // Reduces v against the pivots; returns the remainder (zero iff member).
  ZRow reduce(ZRow v) const {
    for (auto& x : v) x = zm_norm(x, R_);
    for (const auto& [col, row] : pivots_) {
      long pv = zm_val(row[col], R_);
      long long a = v[col];
      if (a == 0) continue;
      if (zm_val(a, R_) < pv) continue;  // cannot clear; leave for membership failure
      long long q = a / zm_pow_p_raw(pv);
      for (size_t j = 0; j < width_; ++j) v[j] = zm_norm(v[j] - q * row[j], R_);
    }
    return v;
  }

  bool member(const ZRow& v) const {
    ZRow r = reduce(v);
    for (auto x : r)
      if (x != 0) return false;
    return true;
  }

  bool contains(const ZSpan& other) const {
    for (const auto& [col, row] : other.pivots_)
      if (!member(row)) return false;
    return true;
  }

  // log_p of the span cardinality.
  long log_size() const {
    long s = 0;
    for (const auto& [col, row] : pivots_) s += R_.n - zm_val(row[col], R_);
    return s;
  }

  ZRows basis() const {
    ZRows rows;
    for (const auto& [col, row] : pivots_) rows.push_back(row);
    return rows;
  }

  friend bool operator==(const ZSpan& a, const ZSpan& b) {
    return a.R_.mod == b.R_.mod && a.width_ == b.width_ && a.pivots_ == b.pivots_;
  }

 private:
  long long zm_pow_p_raw(long e) const {
    long long r = 1;
    for (long i = 0; i < e; ++i) r *= R_.p;
    return r;
  }

  void insert(ZRow row) {
    for (;;) {
      size_t lead = width_;
      for (size_t j = 0; j < width_; ++j)
        if (row[j] != 0) {
          lead = j;
          break;
        }
      if (lead == width_) return;
      long v = zm_val(row[lead], R_);
      auto it = pivots_.find(lead);
      if (it == pivots_.end()) {
        // Normalize the leading entry to p^v.
        long long unit = zm_norm(row[lead] / zm_pow_p_raw(v), R_);
        long long inv = zm_inv_unit(unit, R_);
        for (auto& x : row) x = zm_norm(x * inv, R_);
        pivots_[lead] = row;
        if (v > 0) {
          ZRow ann = row;
          long long s = zm_pow_p_raw(R_.n - v);
          for (auto& x : ann) x = zm_norm(x * s, R_);
          insert(std::move(ann));
        }
        return;
      }
      long pv = zm_val(it->second[lead], R_);
      if (v >= pv) {
        long long q = row[lead] / zm_pow_p_raw(pv);
        for (size_t j = 0; j < width_; ++j) row[j] = zm_norm(row[j] - q * it->second[j], R_);
      } else {
        ZRow old = it->second;
        pivots_.erase(it);
        // The smaller-valuation row takes the pivot; re-insert both.
        long long unit = zm_norm(row[lead] / zm_pow_p_raw(v), R_);
        long long inv = zm_inv_unit(unit, R_);
        for (auto& x : row) x = zm_norm(x * inv, R_);
        pivots_[lead] = row;
        if (v > 0) {
          ZRow ann = row;
          long long s = zm_pow_p_raw(R_.n - v);
          for (auto& x : ann) x = zm_norm(x * s, R_);
          insert(std::move(ann));
        }
        insert(std::move(old));
        return;
      }
    }
  }

  // Reduce above-pivot entries so the basis is canonical.
  void canonicalize() {
    for (auto& [col, row] : pivots_) {
      for (const auto& [c2, r2] : pivots_) {
        if (c2 <= col) continue;
        long pv = zm_val(r2[c2], R_);
        long long a = row[c2];
        if (a == 0) continue;
        long long q = a / zm_pow_p_raw(pv);
        if (q == 0) continue;
        for (size_t j = 0; j < width_; ++j) row[j] = zm_norm(row[j] - q * r2[j], R_);
      }
    }
  }

  ZRing R_;
  size_t width_;
  std::map<size_t, ZRow> pivots_;
};

// Matrix product x -> x * M for row vectors.
inline ZRow zm_apply(const ZRow& x, const ZRows& M, size_t out_width, const ZRing& R) {
  ZRow r(out_width, 0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < out_width; ++j) r[j] = zm_norm(r[j] + x[i] * M[i][j], R);
  }
  return r;
}

// Row-span kernel of x -> x * M over Z/p^n, via diagonalization with row
// transforms tracked (column operations do not change the kernel).
inline ZRows zm_kernel(ZRows M, size_t rows, size_t cols, const ZRing& R) {
  ZRows U(rows, ZRow(rows, 0));
  for (size_t i = 0; i < rows; ++i) U[i][i] = 1;
  size_t steps = std::min(rows, cols);
  std::vector<long> pivot_val;
  for (size_t k = 0; k < steps; ++k) {
    long best = R.n;
    size_t bi = k, bj = k;
    for (size_t i = k; i < rows; ++i)
      for (size_t j = k; j < cols; ++j) {
        long v = zm_val(M[i][j], R);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= R.n) break;
    std::swap(M[k], M[bi]);
    std::swap(U[k], U[bi]);
    for (size_t i = 0; i < rows; ++i) std::swap(M[i][k], M[i][bj]);
    long long pk = 1;
    for (long t = 0; t < best; ++t) pk *= R.p;
    long long inv = zm_inv_unit(zm_norm(M[k][k] / pk, R), R);
    for (size_t j = 0; j < cols; ++j) M[k][j] = zm_norm(M[k][j] * inv, R);
    for (size_t j = 0; j < rows; ++j) U[k][j] = zm_norm(U[k][j] * inv, R);
    for (size_t i = 0; i < rows; ++i) {
      if (i == k || M[i][k] == 0) continue;
      long long q = M[i][k] / pk;
      for (size_t j = 0; j < cols; ++j) M[i][j] = zm_norm(M[i][j] - q * M[k][j], R);
      for (size_t j = 0; j < rows; ++j) U[i][j] = zm_norm(U[i][j] - q * U[k][j], R);
    }
    for (size_t j = 0; j < cols; ++j) {
      if (j == k || M[k][j] == 0) continue;
      long long q = M[k][j] / pk;
      for (size_t i = 0; i < rows; ++i) M[i][j] = zm_norm(M[i][j] - q * M[i][k], R);
    }
    pivot_val.push_back(best);
  }
  ZRows ker;
  for (size_t i = 0; i < rows; ++i) {
    if (i < pivot_val.size()) {
      if (pivot_val[i] == 0) continue;
      long long s = 1;
      for (long t = 0; t < R.n - pivot_val[i]; ++t) s *= R.p;
      ZRow g(rows, 0);
      for (size_t j = 0; j < rows; ++j) g[j] = zm_norm(U[i][j] * s, R);
      ker.push_back(std::move(g));
    } else {
      ker.push_back(U[i]);
    }
  }
  return ker;
}

}  // namespace slopeforge
