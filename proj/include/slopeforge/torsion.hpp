#pragma once

#include <algorithm>
#include <map>

#include "slopeforge/phimod.hpp"
#include "slopeforge/zmod.hpp"

namespace slopeforge {

// Torsion phi-modules over (Z/p^n)[[u]], free of rank r over the truncated
// ring, with polynomial Frobenius data held to u-precision N.  A stored
// shift s means the actual Frobenius is u^s times the held matrix.
struct TkRing {
  long p;
  long n;
  long N;
  ZRing Z;  // zring(p, n)
};

inline TkRing tk_ring(long p, long n, long N) { return TkRing{p, n, N, zring(p, n)}; }

using ZSeries = std::vector<long long>;  // ascending u-coefficients, length N

inline ZSeries zs_zero(const TkRing& R) { return ZSeries(R.N, 0); }

inline ZSeries zs_make(const TkRing& R, std::vector<long long> cs) {
  cs.resize(R.N, 0);
  for (auto& x : cs) x = zm_norm(x, R.Z);
  return cs;
}

inline ZSeries zs_add(const TkRing& R, const ZSeries& a, const ZSeries& b) {
  ZSeries r(R.N);
  for (long i = 0; i < R.N; ++i) r[i] = zm_norm(a[i] + b[i], R.Z);
  return r;
}

inline ZSeries zs_sub(const TkRing& R, const ZSeries& a, const ZSeries& b) {
  ZSeries r(R.N);
  for (long i = 0; i < R.N; ++i) r[i] = zm_norm(a[i] - b[i], R.Z);
  return r;
}

inline ZSeries zs_mul(const TkRing& R, const ZSeries& a, const ZSeries& b) {
  ZSeries r(R.N, 0);
  for (long i = 0; i < R.N; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; i + j < R.N; ++j) r[i + j] = zm_norm(r[i + j] + a[i] * b[j], R.Z);
  }
  return r;
}

inline ZSeries zs_smul(const TkRing& R, long long s, const ZSeries& a) {
  ZSeries r(R.N);
  for (long i = 0; i < R.N; ++i) r[i] = zm_norm(s * a[i], R.Z);
  return r;
}

inline ZSeries zs_shift(const TkRing& R, const ZSeries& a, long k) {
  ZSeries r(R.N, 0);
  for (long i = 0; i + k < R.N; ++i)
    if (i + k >= 0) r[i + k] = a[i];
  return r;
}

inline ZSeries zs_frobenius(const TkRing& R, const ZSeries& a) {
  ZSeries r(R.N, 0);
  for (long i = 0; i * R.p < R.N; ++i) r[i * R.p] = a[i];
  return r;
}

inline bool zs_is_zero(const ZSeries& a) {
  for (auto x : a)
    if (x != 0) return false;
  return true;
}

struct TorsionKisinModule {
  TkRing R;
  size_t r;
  long shift;  // actual Frobenius = u^shift * A
  std::vector<std::vector<ZSeries>> A;
};

inline TorsionKisinModule tk_make(long p, long n, long N,
                                  std::vector<std::vector<ZSeries>> a, long shift = 0) {
  TkRing R = tk_ring(p, n, N);
  for (auto& row : a)
    for (auto& x : row) x = zs_make(R, std::move(x));
  return TorsionKisinModule{R, a.size(), shift, std::move(a)};
}

inline TorsionKisinModule tk_twist(const TorsionKisinModule& m, long i) {
  TorsionKisinModule t = m;
  t.shift += i;
  return t;
}

inline bool tk_is_effective(const TorsionKisinModule& m) {
  if (m.shift >= 0) return true;
  for (const auto& row : m.A)
    for (const auto& x : row)
      for (long k = 0; k < -m.shift; ++k)
        if (x[k] != 0) return false;
  return true;
}

// Matrix with the shift folded in; requires effectivity.
inline std::vector<std::vector<ZSeries>> tk_effective_matrix(const TorsionKisinModule& m) {
  if (!tk_is_effective(m)) fail(errc::domain_mismatch, "module is not effective");
  auto a = m.A;
  for (auto& row : a)
    for (auto& x : row) x = zs_shift(m.R, x, m.shift);
  return a;
}

inline long tk_rank(const TorsionKisinModule& m) { return m.R.n * static_cast<long>(m.r); }
inline long tk_mu_iw(const TorsionKisinModule& m) { return tk_rank(m); }

namespace tk_detail {

// Flattens the column span of u^shift*A (closed under u-multiplication)
// inside (Z/p^n)^(r*width) and returns log_p of the cokernel cardinality.
inline long coker_length(const TorsionKisinModule& m, long extra_twist, long width) {
  auto a = tk_effective_matrix(m);
  ZSpan span(m.R.Z, m.r * width);
  for (size_t j = 0; j < m.r; ++j)
    for (long k = 0; k < width; ++k) {
      ZRow row(m.r * width, 0);
      for (size_t i = 0; i < m.r; ++i)
        for (long t = 0; t + k + extra_twist < width; ++t)
          row[i * width + t + k + extra_twist] = a[i][j][t];
      span.add(std::move(row));
    }
  return static_cast<long>(m.r) * width * m.R.n - span.log_size();
}

}  // namespace tk_detail

inline Rat tk_degree(const TorsionKisinModule& m) {
  long i0 = std::max(0L, -m.shift);
  long len = tk_detail::coker_length(tk_twist(m, i0), 0, m.R.N);
  long guard = tk_detail::coker_length(tk_twist(m, i0), 0, m.R.N - 1);
  if (len != guard) fail(errc::precision_exhausted, "cokernel touches the u-precision guard");
  return Rat(-len + i0 * tk_rank(m));
}

inline PTorsionPhiModule tk_reduce_p(const TorsionKisinModule& m) {
  auto a = tk_effective_matrix(m);
  Mat<FpRatFun> out(m.r, std::vector<FpRatFun>(m.r, fprf_zero(m.R.p)));
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j) {
      std::vector<long> cs(a[i][j].size());
      for (size_t k = 0; k < cs.size(); ++k) cs[k] = static_cast<long>(a[i][j][k] % m.R.p);
      out[i][j] = fprf(fp_make(m.R.p, std::move(cs)));
    }
  return pt_make(m.R.p, m.R.N, std::move(out));
}

namespace tk_detail {

inline std::vector<long> fp_coeffs(const FpRatFun& x, long N) {
  if (!(x.den.deg() == 0 && x.den.c.size() == 1 && x.den.c[0] == 1))
    fail(errc::domain_mismatch, "expected a polynomial value");
  std::vector<long> cs(N, 0);
  for (size_t k = 0; k < x.num.c.size() && k < static_cast<size_t>(N); ++k)
    cs[k] = x.num.c[k];
  return cs;
}

struct FpSolve {
  bool solvable = false;
  std::vector<long> particular;       // length = unknowns
  std::vector<std::vector<long>> ker; // kernel basis
};

// Solves T x = b over F_p for a dense T (rows x cols).
inline FpSolve fp_solve(long p, const std::vector<std::vector<long>>& T,
                        const std::vector<long>& b) {
  size_t rows = T.size(), cols = rows ? T[0].size() : 0;
  Mat<FpElem> aug(rows, std::vector<FpElem>(cols + 1, fpe(p, 0)));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = fpe(p, T[i][j]);
    aug[i][cols] = fpe(p, b[i]);
  }
  aug = rref(aug);
  FpSolve out;
  std::vector<long> pivot_of_col(cols, -1);
  for (size_t i = 0; i < aug.size(); ++i) {
    size_t lead = cols + 1;
    for (size_t j = 0; j <= cols; ++j)
      if (!is_zero_elem(aug[i][j])) {
        lead = j;
        break;
      }
    if (lead == cols) return out;  // inconsistent
    if (lead > cols) continue;
    pivot_of_col[lead] = static_cast<long>(i);
  }
  out.solvable = true;
  out.particular.assign(cols, 0);
  for (size_t j = 0; j < cols; ++j)
    if (pivot_of_col[j] >= 0) out.particular[j] = aug[pivot_of_col[j]][cols].v;
  for (size_t j = 0; j < cols; ++j) {
    if (pivot_of_col[j] >= 0) continue;
    std::vector<long> v(cols, 0);
    v[j] = 1;
    for (size_t l = 0; l < cols; ++l)
      if (pivot_of_col[l] >= 0) v[l] = fp_mod(-aug[pivot_of_col[l]][j].v, p);
    out.ker.push_back(std::move(v));
  }
  return out;
}

}  // namespace tk_detail

// A stable line of the mod-p reduction together with the largest p-power
// depth to which it lifts (capped at n), a witness generator and contraction
// at that depth, and whether the depth verdict survived the branching cap.
struct TkLine {
  PtLine line;
  size_t pivot;
  long depth;
  bool exact;
  std::vector<ZSeries> witness_w;
  ZSeries witness_lambda;
};

inline TkLine tk_line_depth(const TorsionKisinModule& m, const PtLine& L) {
  const TkRing& R = m.R;
  long p = R.p, N = R.N;
  auto a = tk_effective_matrix(m);
  auto m1 = tk_reduce_p(m);

  size_t i0 = 0;
  while (i0 < m.r && !(L.w[i0].num.c == std::vector<long>{1} && L.w[i0].den.c == std::vector<long>{1}))
    ++i0;
  if (i0 >= m.r) fail(errc::verification_failed, "line generator has no pivot coordinate");
  size_t i1 = 1 - i0;

  auto v = pt_apply(m1, L.w);
  auto lambda_bar = tk_detail::fp_coeffs(v[i0], N);
  std::vector<std::vector<long>> wbar(2);
  wbar[0] = tk_detail::fp_coeffs(L.w[0], N);
  wbar[1] = tk_detail::fp_coeffs(L.w[1], N);

  // F_p matrix of (c, m) -> A*phi(c) - lambda*c - m*w with the gauge c_{i0}=0.
  // Unknown layout: c_{i1} coefficients 0..N-1, then m coefficients 0..N-1.
  auto abar = [&](size_t i, size_t j) { return tk_detail::fp_coeffs(m1.A[i][j], N); };
  std::vector<std::vector<long>> T(2 * N, std::vector<long>(2 * N, 0));
  auto add_poly = [&](size_t coord, long shift_k, const std::vector<long>& poly, long sign,
                      size_t col) {
    for (long t = 0; t + shift_k < N; ++t)
      T[coord * N + t + shift_k][col] =
          fp_mod(T[coord * N + t + shift_k][col] + sign * poly[t], p);
  };
  for (long k = 0; k < N; ++k) {
    for (size_t i = 0; i < 2; ++i)
      if (k * p < N) add_poly(i, k * p, abar(i, i1), 1, k);  // A*phi(u^k e_{i1})
    add_poly(i1, k, lambda_bar, -1, k);                      // -lambda*c
    for (size_t i = 0; i < 2; ++i) add_poly(i, k, wbar[i], -1, N + k);  // -m*w
  }

  struct State {
    std::vector<ZSeries> w;
    ZSeries lam;
  };
  State init;
  init.w = {zs_zero(R), zs_zero(R)};
  for (size_t i = 0; i < 2; ++i)
    for (long t = 0; t < N; ++t) init.w[i][t] = wbar[i][t];
  init.lam = zs_zero(R);
  for (long t = 0; t < N; ++t) init.lam[t] = lambda_bar[t];

  std::vector<State> states{init};
  bool exact = true;
  long depth = 1;
  const size_t state_cap = 128;
  const size_t combo_cap = 64;

  for (long k = 1; k < R.n; ++k) {
    long long pk = 1;
    for (long t = 0; t < k; ++t) pk *= p;
    std::vector<State> next;
    for (const auto& st : states) {
      // residual = A*phi(w) - lambda*w, divisible by p^k by construction
      std::vector<ZSeries> res(2, zs_zero(R));
      for (size_t i = 0; i < 2; ++i) {
        for (size_t j = 0; j < 2; ++j)
          res[i] = zs_add(R, res[i], zs_mul(R, a[i][j], zs_frobenius(R, st.w[j])));
        res[i] = zs_sub(R, res[i], zs_mul(R, st.lam, st.w[i]));
      }
      std::vector<long> rhs(2 * N, 0);
      for (size_t i = 0; i < 2; ++i)
        for (long t = 0; t < N; ++t) {
          if (res[i][t] % pk != 0)
            fail(errc::verification_failed, "lifting residual not divisible by p^k");
          rhs[i * N + t] = fp_mod(static_cast<long>(-(res[i][t] / pk) % p), p);
        }
      auto sol = tk_detail::fp_solve(p, T, rhs);
      if (!sol.solvable) continue;
      // Enumerate the affine solution space, capped.
      std::vector<std::vector<long>> picks{sol.particular};
      size_t d = sol.ker.size();
      double total = 1;
      for (size_t t = 0; t < d; ++t) total *= p;
      if (total <= combo_cap) {
        std::vector<long> idx(d, 0);
        for (;;) {
          size_t t = 0;
          while (t < d && ++idx[t] == p) idx[t++] = 0;
          if (t == d) break;
          std::vector<long> x = sol.particular;
          for (size_t q = 0; q < d; ++q)
            for (size_t l = 0; l < x.size(); ++l)
              x[l] = fp_mod(x[l] + idx[q] * sol.ker[q][l], p);
          picks.push_back(std::move(x));
        }
      } else {
        for (const auto& kv : sol.ker) {
          std::vector<long> x = sol.particular;
          for (size_t l = 0; l < x.size(); ++l) x[l] = fp_mod(x[l] + kv[l], p);
          picks.push_back(std::move(x));
        }
        exact = false;
      }
      for (const auto& x : picks) {
        State ns = st;
        for (long t = 0; t < N; ++t) {
          ns.w[i1][t] = zm_norm(ns.w[i1][t] + pk * x[t], R.Z);
          ns.lam[t] = zm_norm(ns.lam[t] + pk * x[N + t], R.Z);
        }
        next.push_back(std::move(ns));
        if (next.size() >= state_cap) break;
      }
      if (next.size() >= state_cap) {
        exact = false;
        break;
      }
    }
    if (next.empty()) break;
    states = std::move(next);
    depth = k + 1;
  }

  TkLine out;
  out.line = L;
  out.pivot = i0;
  out.depth = depth;
  out.exact = depth == R.n ? true : exact;
  out.witness_w = states.front().w;
  out.witness_lambda = states.front().lam;
  return out;
}

// A subobject descriptor: p-layer signature (0^a, L^b, M^c) with a+b+c = n.
struct TkSubPoint {
  long mu;   // Iwasawa rank b + r*c
  Rat deg;   // b*deg(L) + c*deg(M/pM)
  long a, b, c;
  int line_index;  // -1 when b = 0
};

struct TkFargues {
  TypeVector polygon;          // n*r entries, Iwasawa-rank units
  Certificate cert;
  std::vector<TkSubPoint> points;
  std::vector<TkSubPoint> hull;  // interior envelope vertices plus endpoint
  std::vector<TkLine> lines;
};

inline TkFargues tk_fargues(const TorsionKisinModule& m) {
  if (m.r > 2) fail(errc::search_budget_exceeded, "subobject search implemented for rank <= 2");
  auto m1 = tk_reduce_p(m);
  Rat deg1 = pt_degree(m1);
  long n = m.R.n;
  long rk = static_cast<long>(m.r);

  TkFargues out;
  out.cert = Certificate{};
  if (m.r == 2)
    for (const auto& L : pt_stable_lines(m1)) {
      auto tl = tk_line_depth(m, L);
      if (!tl.exact) out.cert = merge(out.cert, Certificate::bounded("lift branching cap"));
      out.lines.push_back(std::move(tl));
    }

  for (long c = 0; c <= n; ++c) {
    if (m.r == 1) {
      if (c > 0) out.points.push_back(TkSubPoint{c, Rat(c) * deg1, n - c, 0, c, -1});
      continue;
    }
    if (c > 0) out.points.push_back(TkSubPoint{2 * c, Rat(c) * deg1, n - c, 0, c, -1});
    for (size_t li = 0; li < out.lines.size(); ++li)
      for (long b = 1; b + c <= n && b <= out.lines[li].depth; ++b)
        out.points.push_back(TkSubPoint{b + 2 * c,
                                        Rat(b) * Rat(-out.lines[li].line.lambda_val) +
                                            Rat(c) * deg1,
                                        n - b - c, b, c, static_cast<int>(li)});
  }

  // Upper concave envelope from (0,0) to (n*r, n*deg1).
  std::map<long, TkSubPoint> best;
  for (const auto& pt : out.points) {
    auto it = best.find(pt.mu);
    if (it == best.end() || pt.deg > it->second.deg) best[pt.mu] = pt;
  }
  if (best.find(n * rk) == best.end() || !(best[n * rk].deg == Rat(n) * deg1))
    fail(errc::verification_failed, "envelope endpoint mismatch");
  std::vector<std::pair<Rat, Rat>> hull{{Rat(0), Rat(0)}};
  std::vector<int> hull_idx{-1};
  std::vector<TkSubPoint> ordered;
  for (const auto& [mu, pt] : best) ordered.push_back(pt);
  for (const auto& pt : ordered) {
    std::pair<Rat, Rat> cur{Rat(pt.mu), pt.deg};
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      if ((b.second - a.second) * (cur.first - b.first) <=
          (cur.second - b.second) * (b.first - a.first)) {
        hull.pop_back();
        hull_idx.pop_back();
      } else
        break;
    }
    hull.push_back(cur);
    hull_idx.push_back(static_cast<int>(&pt - ordered.data()));
  }
  for (size_t i = 1; i < hull.size(); ++i) out.hull.push_back(ordered[hull_idx[i]]);

  std::vector<Rat> entries;
  for (size_t i = 1; i < hull.size(); ++i) {
    Rat width = hull[i].first - hull[i - 1].first;
    Rat slope = (hull[i].second - hull[i - 1].second) / width;
    long w = static_cast<long>(rat_num(width));
    for (long t = 0; t < w; ++t) entries.push_back(slope);
  }
  out.polygon = TypeVector(std::move(entries));
  return out;
}

inline Rat tk_mu_min(const TorsionKisinModule& m) {
  auto f = tk_fargues(m);
  return f.polygon.entries().back();
}

// The last Harder-Narasimhan quotient M/F^{>mu_min}, returned as a torsion
// module over (Z/p^b)[[u]] in the quotient basis.
inline TorsionKisinModule tk_min_quotient(const TorsionKisinModule& m) {
  auto f = tk_fargues(m);
  if (f.hull.size() == 1) return m;  // semistable
  const TkSubPoint& v = f.hull[f.hull.size() - 2];
  if (v.line_index < 0 || m.r != 2)
    fail(errc::verification_failed, "unexpected envelope vertex for the minimal quotient");
  const TkLine& tl = f.lines[v.line_index];
  long b = v.b;
  if (v.a != 0) fail(errc::verification_failed, "minimal quotient vertex has a zero layer");
  // Quotient of M_b by the lifted line <w>: basis = image of e_{i1},
  // phi(e_{i1}) = A[i0][i1] e_{i0} + A[i1][i1] e_{i1} with e_{i0} = -w_{i1} e_{i1}.
  size_t i0 = tl.pivot, i1 = 1 - i0;
  auto a = tk_effective_matrix(m);
  TkRing Rb = tk_ring(m.R.p, b, m.R.N);
  auto trunc = [&](const ZSeries& x) {
    ZSeries y(x.begin(), x.end());
    for (auto& t : y) t = zm_norm(t, Rb.Z);
    return y;
  };
  ZSeries entry = zs_sub(Rb, trunc(a[i1][i1]), zs_mul(Rb, trunc(a[i0][i1]), trunc(tl.witness_w[i1])));
  return tk_make(m.R.p, b, m.R.N, {{entry}});
}

}  // namespace slopeforge
