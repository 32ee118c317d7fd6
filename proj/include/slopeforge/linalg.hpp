#pragma once

#include <vector>

#include "slopeforge/snf.hpp"

namespace slopeforge {

// Prime-field scalar for exact linear algebra over F_p.
struct FpElem {
  long p = 2;
  long v = 0;
};

inline FpElem fpe(long p, long v) { return FpElem{p, fp_mod(v, p)}; }
inline FpElem operator+(const FpElem& a, const FpElem& b) { return fpe(a.p, a.v + b.v); }
inline FpElem operator-(const FpElem& a, const FpElem& b) { return fpe(a.p, a.v - b.v); }
inline FpElem operator*(const FpElem& a, const FpElem& b) { return fpe(a.p, a.v * b.v); }
inline FpElem operator/(const FpElem& a, const FpElem& b) {
  return fpe(a.p, a.v * fp_inv_scalar(b.v, a.p));
}
inline bool operator==(const FpElem& a, const FpElem& b) { return a.p == b.p && a.v == b.v; }
inline FpElem zero_like(const FpElem& x) { return FpElem{x.p, 0}; }
inline FpElem one_like(const FpElem& x) { return FpElem{x.p, 1}; }
inline bool is_zero_elem(const FpElem& x) { return x.v == 0; }

// Subspaces are row spans; reduced row echelon form makes them canonical.
template <class K>
Mat<K> rref(Mat<K> a) {
  if (a.empty()) return a;
  size_t rows = a.size(), cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = rows;
    for (size_t i = r; i < rows; ++i)
      if (!is_zero_elem(a[i][c])) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    K inv = one_like(a[r][c]) / a[r][c];
    for (size_t j = 0; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero_elem(a[i][c])) continue;
      K f = a[i][c];
      for (size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    ++r;
  }
  a.resize(r, std::vector<K>(cols, rows ? zero_like(a.empty() ? K{} : a[0][0]) : K{}));
  return a;
}

template <class K>
size_t mat_rank(const Mat<K>& a) {
  return rref(a).size();
}

// Reduce v against an RREF basis; remainder is zero iff v is in the span.
template <class K>
std::vector<K> span_reduce(std::vector<K> v, const Mat<K>& basis_rref) {
  for (const auto& row : basis_rref) {
    size_t lead = row.size();
    for (size_t j = 0; j < row.size(); ++j)
      if (!is_zero_elem(row[j])) {
        lead = j;
        break;
      }
    if (lead == row.size()) continue;
    if (is_zero_elem(v[lead])) continue;
    K f = v[lead];
    for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * row[j];
  }
  return v;
}

template <class K>
bool span_member(const std::vector<K>& v, const Mat<K>& basis_rref) {
  for (const auto& x : span_reduce(v, basis_rref))
    if (!is_zero_elem(x)) return false;
  return true;
}

template <class K>
Mat<K> span_sum(const Mat<K>& a, const Mat<K>& b) {
  Mat<K> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return rref(all);
}

// Kernel of x -> x * M (row vectors), as an RREF row basis.
template <class K>
Mat<K> row_kernel(const Mat<K>& M, size_t rows, size_t cols, const K& model) {
  Mat<K> aug(rows, std::vector<K>(cols + rows, zero_like(model)));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = M[i][j];
    aug[i][cols + i] = one_like(model);
  }
  aug = rref(aug);
  Mat<K> ker;
  for (const auto& row : aug) {
    bool zero_left = true;
    for (size_t j = 0; j < cols; ++j)
      if (!is_zero_elem(row[j])) {
        zero_left = false;
        break;
      }
    if (zero_left) ker.push_back(std::vector<K>(row.begin() + cols, row.end()));
  }
  return rref(ker);
}

// Intersection of two row spans.
template <class K>
Mat<K> span_intersect(const Mat<K>& a, const Mat<K>& b, size_t dim, const K& model) {
  if (a.empty() || b.empty()) return {};
  Mat<K> stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  Mat<K> ker = row_kernel(stacked, stacked.size(), dim, model);
  Mat<K> result;
  for (const auto& coeffs : ker) {
    std::vector<K> v(dim, zero_like(model));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < dim; ++j) v[j] = v[j] + coeffs[i] * a[i][j];
    result.push_back(std::move(v));
  }
  return rref(result);
}

// Projection V -> V/W as a dim x q matrix (right multiplication), where q =
// dim - rank W; kernel is exactly W.
template <class K>
Mat<K> quotient_map(const Mat<K>& w_rref, size_t dim, const K& model) {
  std::vector<bool> is_pivot(dim, false);
  for (const auto& row : w_rref)
    for (size_t j = 0; j < dim; ++j)
      if (!is_zero_elem(row[j])) {
        is_pivot[j] = true;
        break;
      }
  std::vector<size_t> free_cols;
  for (size_t j = 0; j < dim; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Mat<K> pi(dim, std::vector<K>(free_cols.size(), zero_like(model)));
  for (size_t i = 0; i < dim; ++i) {
    std::vector<K> e(dim, zero_like(model));
    e[i] = one_like(model);
    e = span_reduce(e, w_rref);
    for (size_t j = 0; j < free_cols.size(); ++j) pi[i][j] = e[free_cols[j]];
  }
  return pi;
}

template <class K>
std::vector<K> vec_mat(const std::vector<K>& v, const Mat<K>& M) {
  size_t cols = M.empty() ? 0 : M[0].size();
  std::vector<K> r(cols, zero_like(v[0]));
  for (size_t i = 0; i < v.size(); ++i) {
    if (is_zero_elem(v[i])) continue;
    for (size_t j = 0; j < cols; ++j) r[j] = r[j] + v[i] * M[i][j];
  }
  return r;
}

template <class K>
Mat<K> span_image(const Mat<K>& span, const Mat<K>& M) {
  Mat<K> img;
  for (const auto& v : span) img.push_back(vec_mat(v, M));
  return rref(img);
}

template <class K>
K mat_det(Mat<K> a) {
  size_t nn = a.size();
  K det = one_like(a[0][0]);
  for (size_t c = 0; c < nn; ++c) {
    size_t piv = nn;
    for (size_t i = c; i < nn; ++i)
      if (!is_zero_elem(a[i][c])) {
        piv = i;
        break;
      }
    if (piv == nn) return zero_like(a[0][0]);
    if (piv != c) {
      std::swap(a[c], a[piv]);
      det = zero_like(det) - det;
    }
    det = det * a[c][c];
    K inv = one_like(a[c][c]) / a[c][c];
    for (size_t i = c + 1; i < nn; ++i) {
      if (is_zero_elem(a[i][c])) continue;
      K f = a[i][c] * inv;
      for (size_t j = c; j < nn; ++j) a[i][j] = a[i][j] - f * a[c][j];
    }
  }
  return det;
}

template <class K>
Mat<K> mat_inverse(const Mat<K>& a) {
  size_t nn = a.size();
  const K model = a[0][0];
  Mat<K> aug(nn, std::vector<K>(2 * nn, zero_like(model)));
  for (size_t i = 0; i < nn; ++i) {
    for (size_t j = 0; j < nn; ++j) aug[i][j] = a[i][j];
    aug[i][nn + i] = one_like(model);
  }
  aug = rref(aug);
  if (aug.size() != nn) fail(errc::not_full_rank, "matrix not invertible");
  for (size_t i = 0; i < nn; ++i)
    for (size_t j = 0; j < nn; ++j)
      if ((i == j) != !is_zero_elem(aug[i][j]))
        fail(errc::not_full_rank, "matrix not invertible");
  Mat<K> inv(nn, std::vector<K>(nn, zero_like(model)));
  for (size_t i = 0; i < nn; ++i)
    for (size_t j = 0; j < nn; ++j) inv[i][j] = aug[i][nn + j];
  return inv;
}

// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier (exact over Q).
inline QPoly char_poly(const Mat<Rat>& a) {
  size_t nn = a.size();
  QPoly c(nn + 1, Rat(0));
  c[nn] = 1;
  Mat<Rat> M = mat_identity<Rat>(nn, Rat(1));
  for (size_t k = 1; k <= nn; ++k) {
    if (k > 1) {
      M = mat_mul(a, M);
      for (size_t i = 0; i < nn; ++i) M[i][i] += c[nn - k + 1];
    }
    Mat<Rat> AM = mat_mul(a, M);
    Rat tr = 0;
    for (size_t i = 0; i < nn; ++i) tr += AM[i][i];
    c[nn - k] = -tr / Rat(static_cast<long>(k));
  }
  return c;
}

}  // namespace slopeforge
