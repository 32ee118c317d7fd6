#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slopeforge/lattice.hpp"
#include "slopeforge/polygon.hpp"
#include "slopeforge/torsion.hpp"

namespace slopeforge {

// A Kisin module over a truncated S = Z_p[[u]]: free of rank r with Frobenius
// E^twist * A, where A has p-integral polynomial entries and det A is E^m
// times a unit of S.  n_max bounds the p-power tower depth and N_u the
// u-precision used for torsion reductions.
struct KisinModule {
  long p;
  size_t r;
  long twist;  // actual Frobenius = E^twist * A
  Mat<QPoly> A;
  EisensteinPoly E;
  long n_max;
  long N_u;
};

namespace k_detail {

inline Mat<QPoly> mat_zero(size_t rows, size_t cols) {
  return Mat<QPoly>(rows, std::vector<QPoly>(cols, q_zero()));
}

inline Mat<QPoly> identity(size_t n) {
  auto out = mat_zero(n, n);
  for (size_t i = 0; i < n; ++i) out[i][i] = q_one();
  return out;
}

inline Mat<QPoly> mul(const Mat<QPoly>& a, const Mat<QPoly>& b) {
  size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  auto out = mat_zero(n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t t = 0; t < k; ++t)
        out[i][j] = q_add(out[i][j], q_mul(a[i][t], b[t][j]));
  return out;
}

inline QPoly det(const Mat<QPoly>& a) {
  size_t n = a.size();
  if (n == 0) return q_one();
  if (n == 1) return a[0][0];
  QPoly s = q_zero();
  for (size_t j = 0; j < n; ++j) {
    if (q_is_zero(a[0][j])) continue;
    Mat<QPoly> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<QPoly> row;
      for (size_t l = 0; l < n; ++l)
        if (l != j) row.push_back(a[i][l]);
      minor.push_back(std::move(row));
    }
    QPoly t = q_mul(a[0][j], det(minor));
    s = (j % 2 == 0) ? q_add(s, t) : q_sub(s, t);
  }
  return s;
}

inline Mat<QPoly> adjugate(const Mat<QPoly>& a) {
  size_t n = a.size();
  if (n == 1) return {{q_one()}};
  auto out = mat_zero(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Mat<QPoly> minor;
      for (size_t ii = 0; ii < n; ++ii) {
        if (ii == i) continue;
        std::vector<QPoly> row;
        for (size_t jj = 0; jj < n; ++jj)
          if (jj != j) row.push_back(a[ii][jj]);
        minor.push_back(std::move(row));
      }
      QPoly c = det(minor);
      out[j][i] = ((i + j) % 2 == 0) ? c : q_neg(c);
    }
  return out;
}

inline Mat<QPoly> frobenius_u(const Mat<QPoly>& a, long p) {
  auto out = a;
  for (auto& row : out)
    for (auto& x : row) x = q_frobenius_u(x, p);
  return out;
}

inline bool p_integral(const QPoly& f, const Int& p) {
  for (const auto& c : f)
    if (c != 0 && vp_rat(c, p) < 0) return false;
  return true;
}

inline long long inv_mod(long long a, long long m) {
  long long r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    s0 -= q * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) fail(errc::domain_mismatch, "coefficient is not a p-adic unit");
  return ((s0 % m) + m) % m;
}

inline QPoly e_power(const EisensteinPoly& E, long k) {
  QPoly out = q_one();
  for (long i = 0; i < k; ++i) out = q_mul(out, E.poly);
  return out;
}

}  // namespace k_detail

inline KisinModule k_make(long p, Mat<QPoly> a, EisensteinPoly E, long twist = 0,
                          long n_max = 4, long N_u = 12) {
  if (E.p != p) fail(errc::ring_mismatch, "Eisenstein polynomial for a different prime");
  if (a.empty()) fail(errc::domain_mismatch, "empty frobenius matrix");
  for (const auto& row : a) {
    if (row.size() != a.size()) fail(errc::length_mismatch, "frobenius matrix not square");
    for (const auto& x : row)
      if (!k_detail::p_integral(x, p))
        fail(errc::domain_mismatch, "frobenius entry is not p-integral");
  }
  QPoly d = k_detail::det(a);
  if (q_is_zero(d)) fail(errc::not_full_rank, "frobenius matrix singular");
  long m = *q_val_E(d, E.poly);
  QPoly g = d;
  for (long i = 0; i < m; ++i) g = q_divmod(g, E.poly).first;
  Rat g0 = q_eval(g, 0);
  if (g0 == 0 || vp_rat(g0, p) != 0)
    fail(errc::domain_mismatch, "determinant is not E^m times a unit");
  return KisinModule{p, a.size(), twist, std::move(a), std::move(E), n_max, N_u};
}

inline KisinModule k_zero_like(const KisinModule& m) {
  return KisinModule{m.p, 0, 0, {}, m.E, m.n_max, m.N_u};
}

inline size_t k_rank(const KisinModule& m) { return m.r; }

inline KisinModule k_twist(const KisinModule& m, long i) {
  KisinModule t = m;
  t.twist += i;
  return t;
}

inline bool k_is_effective(const KisinModule& m) {
  if (m.twist >= 0) return true;
  for (const auto& row : m.A)
    for (const auto& x : row) {
      QPoly y = x;
      for (long k = 0; k < -m.twist; ++k) {
        auto [q, r] = q_divmod(y, m.E.poly);
        if (!r.empty()) return false;
        y = q;
      }
    }
  return true;
}

// The actual Frobenius matrix with the E-twist folded in; requires that the
// result has polynomial entries.
inline Mat<QPoly> k_effective_matrix(const KisinModule& m) {
  auto a = m.A;
  if (m.twist >= 0) {
    QPoly f = k_detail::e_power(m.E, m.twist);
    for (auto& row : a)
      for (auto& x : row) x = q_mul(x, f);
    return a;
  }
  if (!k_is_effective(m)) fail(errc::domain_mismatch, "module is not effective");
  for (auto& row : a)
    for (auto& x : row)
      for (long k = 0; k < -m.twist; ++k) x = q_divmod(x, m.E.poly).first;
  return a;
}

inline TypeVector k_hodge_type(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "hodge type of the zero module");
  EContext ctx{m.E};
  QRatFun tw = ctx.unif(m.twist);
  Mat<QRatFun> b(m.r, std::vector<QRatFun>(m.r, qrf_zero()));
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j) b[i][j] = qrf(m.A[i][j]) * tw;
  return pos(ctx, standard_lattice(ctx, m.r), DvrLattice<EContext>{std::move(b)});
}

inline TypeVector k_crystal_hodge_type(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "hodge type of the zero module");
  PContext ctx{Int(m.p)};
  Rat e0 = q_eval(m.E.poly, 0);
  Rat tw = 1;
  for (long k = 0; k < (m.twist < 0 ? -m.twist : m.twist); ++k) tw *= e0;
  if (m.twist < 0) tw = Rat(1) / tw;
  Mat<QRatFun> b(m.r, std::vector<QRatFun>(m.r, qrf_zero()));
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j) b[i][j] = qrf(q_const(q_eval(m.A[i][j], 0) * tw));
  return pos(ctx, standard_lattice(ctx, m.r), DvrLattice<PContext>{std::move(b)});
}

inline TorsionKisinModule k_reduce(const KisinModule& m, long n) {
  if (m.r == 0) fail(errc::zero_object, "reduction of the zero module");
  if (n < 1 || n > m.n_max)
    fail(errc::domain_mismatch, "tower level outside the precision budget");
  auto a = k_effective_matrix(m);
  long long pn = 1;
  for (long i = 0; i < n; ++i) pn *= m.p;
  Int pni(pn);
  std::vector<std::vector<ZSeries>> out(m.r, std::vector<ZSeries>(m.r));
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j) {
      ZSeries cs(m.N_u, 0);
      for (size_t t = 0; t < a[i][j].size() && t < static_cast<size_t>(m.N_u); ++t) {
        const Rat& c = a[i][j][t];
        long long nn = static_cast<long long>(rat_num(c) % pni);
        long long dd = static_cast<long long>(rat_den(c) % pni);
        cs[t] = nn * k_detail::inv_mod(dd, pn);
      }
      out[i][j] = std::move(cs);
    }
  return tk_make(m.p, n, m.N_u, std::move(out));
}

inline PolygonFunction k_fargues_n(const KisinModule& m, long n) {
  auto f = tk_fargues(k_reduce(m, n));
  return polygon_scale_y(Rat(1, m.E.e()), polygon_rescale(n, polygon_of(f.polygon)));
}

inline PolygonFunction k_fargues_limit(const KisinModule& m) {
  if (m.n_max < 2) fail(errc::domain_mismatch, "limit approximation needs n_max >= 2");
  PolygonFunction f = k_fargues_n(m, 1);
  for (long n = 2; n <= m.n_max; n *= 2) f = polygon_min(f, k_fargues_n(m, n));
  return f;
}

namespace k_detail {

// E-adic valuations of a split diagonal Frobenius whose entries are all
// E-power multiples of units; nullopt when the module is not of this shape.
inline std::optional<std::vector<long>> diagonal_vals(const KisinModule& m,
                                                      const Mat<QPoly>& aeff) {
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j)
      if (i != j && !q_is_zero(aeff[i][j])) return std::nullopt;
  std::vector<long> val(m.r);
  for (size_t i = 0; i < m.r; ++i) {
    val[i] = *q_val_E(aeff[i][i], m.E.poly);
    QPoly g = aeff[i][i];
    for (long k = 0; k < val[i]; ++k) g = q_divmod(g, m.E.poly).first;
    Rat g0 = q_eval(g, 0);
    if (g0 == 0 || vp_rat(g0, m.p) != 0) return std::nullopt;
  }
  return val;
}

}  // namespace k_detail

inline bool k_is_semistable(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "semistability of the zero module");
  if (auto dv = k_detail::diagonal_vals(m, k_effective_matrix(m)))
    return *std::min_element(dv->begin(), dv->end()) ==
           *std::max_element(dv->begin(), dv->end());
  auto f = pt_fargues(tk_reduce_p(k_reduce(m, 1)));
  const auto& e = f.polygon.entries();
  for (const auto& x : e)
    if (!(x == e[0])) return false;
  return true;
}

inline bool k_is_hn_type(const KisinModule& m) {
  PolygonFunction f1 = k_fargues_n(m, 1);
  for (long n = 2; n <= m.n_max; n *= 2)
    if (!(k_fargues_n(m, n) == f1)) return false;
  return true;
}

// Minimal slope of the level-one Fargues polygon, in E-normalized units.
inline Rat k_mu_min(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "minimal slope of the zero module");
  if (auto dv = k_detail::diagonal_vals(m, k_effective_matrix(m)))
    return Rat(-*std::max_element(dv->begin(), dv->end()));
  auto f = pt_fargues(tk_reduce_p(k_reduce(m, 1)));
  return f.polygon.entries().back() / Rat(m.E.e());
}

// One step of the theta-algorithm.  For a semistable input theta is zero and
// kpart = M; for an input carrying an exact stable line to full depth, theta
// is the line, kpart the quotient, and M' = M; otherwise theta = M' is the
// full-rank refinement spanned by the lifted line and p^k0 times the
// complementary coordinate, and kpart is zero.
struct KThetaStep {
  KisinModule theta;
  KisinModule mprime;
  KisinModule kpart;
  long k0;
  Mat<QPoly> basis;  // columns of theta inside M
  bool refined;      // true when theta = M' is a proper full-rank sublattice
};

namespace k_detail {

// Integer representatives of a witness coordinate mod p^d, plain and balanced.
inline std::vector<QPoly> witness_candidates(const ZSeries& w, long long pd) {
  std::vector<Rat> plain, balanced;
  for (auto x : w) {
    long long v = ((x % pd) + pd) % pd;
    plain.push_back(Rat(v));
    balanced.push_back(Rat(2 * v > pd ? v - pd : v));
  }
  std::vector<QPoly> out{q_poly(plain)};
  QPoly b = q_poly(balanced);
  if (!(b == out[0])) out.push_back(std::move(b));
  return out;
}

}  // namespace k_detail

inline KThetaStep k_theta_step(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "theta of the zero module");
  long p = m.p;
  auto aeff = k_effective_matrix(m);

  if (k_is_semistable(m)) {
    KisinModule eff = k_make(p, aeff, m.E, 0, m.n_max, m.N_u);
    return KThetaStep{k_zero_like(m), eff, eff, 1, k_detail::mat_zero(m.r, 0), false};
  }

  // Split diagonal path: theta is the span of the non-minimal-slope
  // coordinates, kpart the minimal-slope block.
  if (auto dv = k_detail::diagonal_vals(m, aeff)) {
    const auto& val = *dv;
    long vmax = *std::max_element(val.begin(), val.end());
    std::vector<size_t> top, bot;
    for (size_t i = 0; i < m.r; ++i) (val[i] < vmax ? top : bot).push_back(i);
    auto block = [&](const std::vector<size_t>& idx) {
      auto b = k_detail::mat_zero(idx.size(), idx.size());
      for (size_t t = 0; t < idx.size(); ++t) b[t][t] = aeff[idx[t]][idx[t]];
      return k_make(p, b, m.E, 0, m.n_max, m.N_u);
    };
    auto basis = k_detail::mat_zero(m.r, top.size());
    for (size_t t = 0; t < top.size(); ++t) basis[top[t]][t] = q_one();
    KisinModule eff = k_make(p, aeff, m.E, 0, m.n_max, m.N_u);
    return KThetaStep{block(top), eff, block(bot), 1, std::move(basis), false};
  }

  if (m.r != 2)
    fail(errc::search_budget_exceeded, "theta step implemented for rank <= 2 or split diagonals");

  auto tf = tk_fargues(k_reduce(m, m.n_max));
  if (tf.hull.size() < 2)
    fail(errc::verification_failed, "destabilized module with a flat envelope");
  const TkSubPoint& v = tf.hull[tf.hull.size() - 2];
  if (v.line_index < 0 || v.a != 0)
    fail(errc::verification_failed, "unexpected envelope vertex in the theta step");
  const TkLine& tl = tf.lines[v.line_index];
  size_t i0 = tl.pivot, i1 = 1 - i0;
  long d = tl.depth;
  long long pd = 1;
  for (long i = 0; i < d; ++i) pd *= p;

  if (d >= m.n_max) {
    // The line lifts through the whole budget: certify an exact generator and
    // return the honest flag.
    for (const QPoly& w1 : k_detail::witness_candidates(tl.witness_w[i1], pd)) {
      QPoly fw = q_frobenius_u(w1, p);
      QPoly lam = q_add(aeff[i0][i0], q_mul(aeff[i0][i1], fw));
      QPoly lhs = q_add(aeff[i1][i0], q_mul(aeff[i1][i1], fw));
      if (!(lhs == q_mul(lam, w1))) continue;
      QPoly qent = q_sub(aeff[i1][i1], q_mul(w1, aeff[i0][i1]));
      KisinModule theta = k_make(p, {{lam}}, m.E, 0, m.n_max, m.N_u);
      KisinModule kpart = k_make(p, {{qent}}, m.E, 0, m.n_max, m.N_u);
      if (!(k_mu_min(theta) > k_mu_min(kpart)))
        fail(errc::verification_failed, "exact line does not destabilize");
      auto basis = k_detail::mat_zero(2, 1);
      basis[i0][0] = q_one();
      basis[i1][0] = w1;
      KisinModule eff = k_make(p, aeff, m.E, 0, m.n_max, m.N_u);
      return KThetaStep{std::move(theta), eff, std::move(kpart), 1, std::move(basis), false};
    }
    fail(errc::precision_exhausted,
         "stable line persists to n_max without an exact polynomial generator");
  }

  // Finite stabilization depth k0 = d: refine by the lifted line.
  for (const QPoly& w1 : k_detail::witness_candidates(tl.witness_w[i1], pd)) {
    auto B = k_detail::mat_zero(2, 2);
    B[i0][0] = q_one();
    B[i1][0] = w1;
    B[i1][1] = q_const(Rat(pd));
    QPoly dB = k_detail::det(B);
    auto num = k_detail::mul(k_detail::mul(k_detail::adjugate(B), aeff),
                             k_detail::frobenius_u(B, p));
    Rat dv = dB[0];
    bool ok = true;
    for (auto& row : num)
      for (auto& x : row) {
        x = q_scale(x, Rat(1) / dv);
        if (!k_detail::p_integral(x, p)) ok = false;
      }
    if (!ok) continue;
    KisinModule theta = k_make(p, num, m.E, 0, m.n_max, m.N_u);
    if (!(k_mu_min(theta) > k_mu_min(m)))
      fail(errc::verification_failed, "minimal slope did not increase across theta");
    return KThetaStep{theta, theta, k_zero_like(m), d, std::move(B), true};
  }
  fail(errc::verification_failed, "lifted line is not exact at the stabilized depth");
}

struct KHnPiece {
  KisinModule piece;
  Rat slope;
};

struct KHnDecomposition {
  KisinModule n;               // HN-type module isogenous to the input
  std::vector<KHnPiece> flag;  // graded pieces, slopes strictly decreasing
  Mat<QPoly> witness;          // columns of n inside the input; det = ±p^D
  long witness_pval;           // D
  Rat envelope_c;              // tower-comparison constant for the witness
  long steps;                  // theta iterations performed
  long step_bound;
};

inline KHnDecomposition k_hn_decompose(const KisinModule& m) {
  if (m.r == 0) fail(errc::zero_object, "decomposition of the zero module");
  Rat mu0 = k_mu_min(m);
  long fact = 1;
  for (size_t i = 2; i <= m.r; ++i) fact *= static_cast<long>(i);
  Rat bound_r = (mu0 < 0 ? -mu0 : Rat(0)) * Rat(m.E.e() * fact);
  long bound = static_cast<long>(rat_num(bound_r) / rat_den(bound_r)) + 1;

  auto aeff_in = k_effective_matrix(m);
  KisinModule cur = k_make(m.p, aeff_in, m.E, 0, m.n_max, m.N_u);
  Mat<QPoly> W = k_detail::identity(m.r);
  long steps = 0;

  for (;;) {
    if (k_is_semistable(cur)) break;
    auto st = k_theta_step(cur);
    if (!st.refined) break;
    W = k_detail::mul(W, st.basis);
    cur = st.theta;
    if (++steps > bound)
      fail(errc::step_budget_exceeded,
           "theta iteration exceeded the slope-discreteness bound " + std::to_string(bound));
  }

  // cur is HN-type; peel its flag by further theta steps.
  std::vector<KHnPiece> rev;
  KisinModule t = cur;
  for (;;) {
    auto st = k_theta_step(t);
    if (st.refined) fail(errc::verification_failed, "refinement inside an HN-type module");
    rev.push_back(KHnPiece{st.kpart, k_mu_min(st.kpart)});
    if (st.theta.r == 0) break;
    t = st.theta;
    ++steps;
  }
  std::vector<KHnPiece> flag(rev.rbegin(), rev.rend());
  for (size_t i = 0; i + 1 < flag.size(); ++i)
    if (!(flag[i].slope > flag[i + 1].slope))
      fail(errc::verification_failed, "flag slopes are not strictly decreasing");

  // Verify the isogeny witness: adj(W) * A_M * phi(W) = det(W) * A_N with
  // det(W) = ±p^D.
  QPoly dW = k_detail::det(W);
  if (q_deg(dW) != 0) fail(errc::verification_failed, "witness determinant is not constant");
  long D = vp_rat(dW[0], m.p);
  Rat unit = dW[0] / rat_p_pow(Int(m.p), D);
  if (!(unit == 1 || unit == -1))
    fail(errc::verification_failed, "witness determinant is not a p-power");
  auto lhs = k_detail::mul(k_detail::mul(k_detail::adjugate(W), aeff_in),
                           k_detail::frobenius_u(W, m.p));
  auto aeff_n = k_effective_matrix(cur);
  for (size_t i = 0; i < m.r; ++i)
    for (size_t j = 0; j < m.r; ++j)
      if (!(lhs[i][j] == q_scale(aeff_n[i][j], dW[0])))
        fail(errc::verification_failed, "witness does not intertwine the Frobenii");

  Rat c = (mu0 < 0 ? -mu0 : Rat(0)) * Rat(static_cast<long>(m.r) * D);
  return KHnDecomposition{cur,   std::move(flag), std::move(W), D,
                          c,     steps,           bound};
}

}  // namespace slopeforge
