#pragma once

#include <functional>
#include <limits>
#include <string>

#include "slopeforge/hn.hpp"
#include "slopeforge/lattice.hpp"

namespace slopeforge {

// A free phi-module over F_p[[u]]: the semilinear map v -> A * phi(v) with
// phi the u -> u^p Frobenius, A invertible over F_p((u)).  Entries are exact
// Laurent data; N_u is the working u-precision for subobject searches.
struct PTorsionPhiModule {
  long p;
  long N_u;
  size_t r;
  Mat<FpRatFun> A;
};

inline PTorsionPhiModule pt_make(long p, long N_u, Mat<FpRatFun> a) {
  PTorsionPhiModule m{p, N_u, a.size(), std::move(a)};
  if (is_zero_elem(mat_det(m.A))) fail(errc::not_full_rank, "frobenius matrix singular");
  return m;
}

inline size_t pt_rank(const PTorsionPhiModule& m) { return m.r; }

// Largest negative valuation appearing in A (0 for effective modules).
inline long pt_denominator_depth(const PTorsionPhiModule& m) {
  long v = 0;
  for (const auto& row : m.A)
    for (const auto& x : row) {
      auto w = fprf_val_u(x);
      if (w && *w < -v) v = -*w;
    }
  return v;
}

inline Rat pt_degree(const PTorsionPhiModule& m) {
  auto v = fprf_val_u(mat_det(m.A));
  return Rat(-*v);
}

inline TypeVector pt_hodge_type(const PTorsionPhiModule& m) {
  UContext ctx{m.p, std::nullopt};
  return pos(ctx, standard_lattice(ctx, m.r), DvrLattice<UContext>{m.A});
}

inline FpRatFun pt_entry_frobenius(const FpRatFun& x) {
  return fprf_reduce(fp_frobenius(x.num), fp_frobenius(x.den));
}

inline std::vector<FpRatFun> pt_apply(const PTorsionPhiModule& m,
                                      const std::vector<FpRatFun>& w) {
  std::vector<FpRatFun> out(m.r, fprf_zero(m.p));
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j)
      out[i] = out[i] + m.A[i][j] * pt_entry_frobenius(w[j]);
  return out;
}

// A u-saturated rank-1 subobject: generator w (polynomial coordinates with
// minimal valuation 0) and the u-valuation of the contraction factor, so
// deg = -lambda_val.
struct PtLine {
  std::vector<FpRatFun> w;
  long lambda_val;
};

namespace pt_detail {

inline long cross_val(const std::vector<FpRatFun>& a, const std::vector<FpRatFun>& b) {
  std::optional<long> best;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      auto v = fprf_val_u(a[i] * b[j] - a[j] * b[i]);
      if (v && (!best || *v < *best)) best = *v;
    }
  return best ? *best : std::numeric_limits<long>::max();
}

inline std::optional<long> min_val(const std::vector<FpRatFun>& v) {
  std::optional<long> best;
  for (const auto& x : v) {
    auto w = fprf_val_u(x);
    if (w && (!best || *w < *best)) best = *w;
  }
  return best;
}

// Enumerates polynomial vectors over F_p of degree < digits in the free
// coordinates, with the pivot coordinate fixed to 1 (or u-multiples below).
inline void enumerate_lines(const PTorsionPhiModule& m, long digits,
                            const std::function<void(const std::vector<FpRatFun>&)>& visit) {
  // Saturated lines in rank 2: (1, b) with b any residue, and (a, 1) with
  // val(a) >= 1.
  long p = m.p;
  long count_b = 1;
  for (long i = 0; i < digits; ++i) count_b *= p;
  for (long code = 0; code < count_b; ++code) {
    long c = code;
    std::vector<long> cs(digits);
    for (long i = 0; i < digits; ++i) {
      cs[i] = c % p;
      c /= p;
    }
    visit({fprf_one(p), fprf(fp_make(p, cs))});
  }
  long count_a = count_b / p;
  for (long code = 0; code < count_a; ++code) {
    long c = code;
    std::vector<long> cs(digits);
    for (long i = 1; i < digits; ++i) {
      cs[i] = c % p;
      c /= p;
    }
    visit({fprf(fp_make(p, cs)), fprf_one(p)});
  }
}

}  // namespace pt_detail

// Exhaustive-at-precision search for phi-stable saturated lines of a rank-2
// module.  A candidate passes when A*phi(w) is parallel to w within the
// provable precision window N_u - (denominator depth of A).
inline std::vector<PtLine> pt_stable_lines(const PTorsionPhiModule& m,
                                           std::optional<long> search_degree = std::nullopt) {
  if (m.r != 2)
    fail(errc::search_budget_exceeded, "line search implemented for rank 2 only");
  long digits = search_degree ? *search_degree + 1 : m.N_u;
  long threshold = m.N_u - pt_denominator_depth(m);
  std::vector<PtLine> out;
  pt_detail::enumerate_lines(m, digits, [&](const std::vector<FpRatFun>& w) {
    auto v = pt_apply(m, w);
    if (pt_detail::cross_val(v, w) < threshold) return;
    auto lv = pt_detail::min_val(v);
    if (!lv) return;  // contraction vanishes at precision
    if (*lv >= threshold || -*lv >= threshold)
      fail(errc::precision_exhausted, "contraction valuation at the precision boundary");
    out.push_back(PtLine{w, *lv});
  });
  // Deduplicate parallel generators, keeping the canonical (first) one.
  std::vector<PtLine> dedup;
  for (const auto& l : out) {
    bool seen = false;
    for (const auto& d : dedup)
      if (pt_detail::cross_val(l.w, d.w) >= m.N_u) {
        seen = true;
        break;
      }
    if (!seen) dedup.push_back(l);
  }
  return dedup;
}

// hncore category instance for rank <= 2 modules.
struct PtCat {
  PTorsionPhiModule m;
  std::optional<long> search_degree;

  struct Obj {
    bool whole;
    PtLine line;  // valid when !whole
  };

  Obj top() const { return Obj{true, {}}; }
  long rank(const Obj& o) const { return o.whole ? static_cast<long>(m.r) : 1; }
  Rat degree(const Obj& o) const { return o.whole ? pt_degree(m) : Rat(-o.line.lambda_val); }
  bool contains(const Obj& inner, const Obj& outer) const {
    if (outer.whole) return true;
    if (inner.whole) return false;
    return pt_detail::cross_val(inner.line.w, outer.line.w) >= m.N_u;
  }
  std::string key(const Obj& o) const {
    if (o.whole) return "";
    std::string s;
    for (const auto& x : o.line.w) s += fp_to_string(x.num) + "|" + fp_to_string(x.den) + ";";
    return s;
  }
  Certificate certificate(const Obj&) const {
    if (!search_degree || *search_degree >= m.N_u - 1) return Certificate{};
    return Certificate::bounded("search_degree=" + std::to_string(*search_degree));
  }
  std::vector<Obj> strict_subobjects(const Obj& o) const {
    if (!o.whole || m.r == 1) return {};
    std::vector<Obj> out;
    for (auto& l : pt_stable_lines(m, search_degree)) out.push_back(Obj{false, std::move(l)});
    return out;
  }
};

struct PtFargues {
  HnFlagOf<PtCat> flag;
  TypeVector polygon;
};

inline PtFargues pt_fargues(const PTorsionPhiModule& m,
                            std::optional<long> search_degree = std::nullopt) {
  PtCat cat{m, search_degree};
  auto flag = hn_flag(cat, cat.top());
  auto poly = hn_polygon_type(cat, flag);
  return PtFargues{std::move(flag), std::move(poly)};
}

inline PTorsionPhiModule pt_tensor(const PTorsionPhiModule& a, const PTorsionPhiModule& b) {
  if (a.p != b.p || a.N_u != b.N_u) fail(errc::ring_mismatch, "tensor over different rings");
  size_t r = a.r * b.r;
  Mat<FpRatFun> m(r, std::vector<FpRatFun>(r, fprf_zero(a.p)));
  for (size_t i = 0; i < a.r; ++i)
    for (size_t j = 0; j < a.r; ++j)
      for (size_t k = 0; k < b.r; ++k)
        for (size_t l = 0; l < b.r; ++l) m[i * b.r + k][j * b.r + l] = a.A[i][j] * b.A[k][l];
  return pt_make(a.p, a.N_u, std::move(m));
}

inline PTorsionPhiModule pt_direct_sum(const PTorsionPhiModule& a, const PTorsionPhiModule& b) {
  if (a.p != b.p || a.N_u != b.N_u) fail(errc::ring_mismatch, "sum over different rings");
  size_t r = a.r + b.r;
  Mat<FpRatFun> m(r, std::vector<FpRatFun>(r, fprf_zero(a.p)));
  for (size_t i = 0; i < a.r; ++i)
    for (size_t j = 0; j < a.r; ++j) m[i][j] = a.A[i][j];
  for (size_t i = 0; i < b.r; ++i)
    for (size_t j = 0; j < b.r; ++j) m[a.r + i][a.r + j] = b.A[i][j];
  return pt_make(a.p, a.N_u, std::move(m));
}

}  // namespace slopeforge
