#pragma once

#include <optional>
#include <utility>

#include "slopeforge/filtration.hpp"
#include "slopeforge/polygon.hpp"
#include "slopeforge/snf.hpp"
#include "slopeforge/types.hpp"

namespace slopeforge {

// Residue field Q[u]/(E) of the E-adic valuation ring, E irreducible monic.
struct QModElem {
  QPoly c;  // reduced mod E
  QPoly mod;
};

inline QModElem qme(QPoly c, const QPoly& mod) {
  return QModElem{q_divmod(std::move(c), mod).second, mod};
}
inline QModElem operator+(const QModElem& a, const QModElem& b) {
  return qme(q_add(a.c, b.c), a.mod);
}
inline QModElem operator-(const QModElem& a, const QModElem& b) {
  return qme(q_sub(a.c, b.c), a.mod);
}
inline QModElem operator*(const QModElem& a, const QModElem& b) {
  return qme(q_mul(a.c, b.c), a.mod);
}
inline QModElem operator/(const QModElem& a, const QModElem& b) {
  if (b.c.empty()) fail(errc::domain_mismatch, "division by zero residue");
  auto [g, s, t] = q_ext_gcd(b.c, b.mod);
  (void)t;
  if (q_deg(g) != 0) fail(errc::domain_mismatch, "non-invertible residue");
  return qme(q_mul(a.c, q_scale(s, Rat(1) / g[0])), a.mod);
}
inline bool operator==(const QModElem& a, const QModElem& b) { return a.c == b.c; }
inline QModElem zero_like(const QModElem& x) { return QModElem{{}, x.mod}; }
inline QModElem one_like(const QModElem& x) { return QModElem{q_one(), x.mod}; }
inline bool is_zero_elem(const QModElem& x) { return x.c.empty(); }

// The three DVR contexts share one interface: fraction-field element type,
// residue-field element type, valuation, uniformizer powers and SNF.
struct UContext {
  long p;
  using Elem = FpRatFun;
  using Res = FpElem;
  std::optional<long> truncation;  // N_u for quotient-ring inputs

  Elem zero() const { return fprf_zero(p); }
  Elem one() const { return fprf_one(p); }
  std::optional<long> val(const Elem& x) const { return fprf_val_u(x); }
  Elem unif(long v) const {
    return v >= 0 ? fprf(fp_monomial(p, v)) : fprf_reduce(fp_one(p), fp_monomial(p, -v));
  }
  SnfResult<Elem> snf(const Mat<Elem>& a) const { return snf_dvr_u(a, p, truncation); }
  Res residue(const Elem& x) const { return fpe(p, fprf_residue(x)); }
};

struct PContext {
  Int p;
  using Elem = QRatFun;
  using Res = FpElem;

  Elem zero() const { return qrf_zero(); }
  Elem one() const { return qrf_one(); }
  std::optional<long> val(const Elem& x) const { return qrf_val_p(x, p); }
  Elem unif(long v) const { return qrf(q_const(rat_p_pow(p, v))); }
  SnfResult<Elem> snf(const Mat<Elem>& a) const { return snf_dvr_p(a, p); }
  Res residue(const Elem& x) const {
    auto v = val(x);
    if (v && *v < 0) fail(errc::domain_mismatch, "residue of negative valuation element");
    if (!v || *v > 0) return fpe(static_cast<long>(p), 0);
    if (q_deg(x.num) > 0 || q_deg(x.den) > 0)
      fail(errc::domain_mismatch, "p-adic lattice entries must be constants");
    long pl = static_cast<long>(p);
    auto cmod = [&](const Rat& r) {
      long nn = static_cast<long>(rat_num(r) % p);
      long dd = static_cast<long>(rat_den(r) % p);
      return fp_mod(nn * fp_inv_scalar(fp_mod(dd, pl), pl), pl);
    };
    return fpe(pl, cmod(x.num[0] / x.den[0]));
  }
};

struct EContext {
  EisensteinPoly E;
  using Elem = QRatFun;
  using Res = QModElem;

  Elem zero() const { return qrf_zero(); }
  Elem one() const { return qrf_one(); }
  std::optional<long> val(const Elem& x) const { return qrf_val_E(x, E.poly); }
  Elem unif(long v) const {
    QPoly Ev = q_one();
    for (long i = 0; i < (v < 0 ? -v : v); ++i) Ev = q_mul(Ev, E.poly);
    return v >= 0 ? qrf(Ev) : qrf_reduce(q_one(), Ev);
  }
  SnfResult<Elem> snf(const Mat<Elem>& a) const { return snf_dvr_E(a, E.poly); }
  Res residue(const Elem& x) const {
    auto v = val(x);
    if (v && *v < 0) fail(errc::domain_mismatch, "residue of negative valuation element");
    if (!v || *v > 0) return QModElem{{}, E.poly};
    return qme(x.num, E.poly) / qme(x.den, E.poly);
  }
};

// A full-rank lattice inside the reference space K^r, spanned by the columns
// of an invertible basis matrix.
template <class Ctx>
struct DvrLattice {
  Mat<typename Ctx::Elem> basis;

  size_t rank() const { return basis.size(); }
};

template <class Ctx>
DvrLattice<Ctx> standard_lattice(const Ctx& ctx, size_t r) {
  return DvrLattice<Ctx>{mat_identity(r, ctx.one())};
}

template <class Ctx>
bool is_unimodular(const Ctx& ctx, const Mat<typename Ctx::Elem>& c) {
  for (const auto& row : c)
    for (const auto& x : row) {
      auto v = ctx.val(x);
      if (v && *v < 0) return false;
    }
  auto dv = ctx.val(mat_det(c));
  return dv && *dv == 0;
}

template <class Ctx>
Mat<typename Ctx::Elem> change_matrix(const DvrLattice<Ctx>& m1, const DvrLattice<Ctx>& m2) {
  if (m1.rank() != m2.rank()) fail(errc::length_mismatch, "lattices in different spaces");
  return mat_mul(mat_inverse(m1.basis), m2.basis);
}

template <class Ctx>
bool lattice_eq(const Ctx& ctx, const DvrLattice<Ctx>& m1, const DvrLattice<Ctx>& m2) {
  return is_unimodular(ctx, change_matrix(m1, m2));
}

template <class Ctx>
TypeVector pos(const Ctx& ctx, const DvrLattice<Ctx>& m1, const DvrLattice<Ctx>& m2) {
  auto res = ctx.snf(change_matrix(m1, m2));
  for (bool c : res.capped)
    if (c) fail(errc::precision_exhausted, "relative position beyond working precision");
  std::vector<Rat> a;
  for (long v : res.diag) a.push_back(Rat(-v));
  return TypeVector(std::move(a));
}

template <class Ctx>
Rat nu(const Ctx& ctx, const DvrLattice<Ctx>& m1, const DvrLattice<Ctx>& m2) {
  return degree(pos(ctx, m1, m2));
}

template <class Ctx>
Rat dist_sq(const Ctx& ctx, const DvrLattice<Ctx>& m1, const DvrLattice<Ctx>& m2) {
  return norm_sq(pos(ctx, m1, m2));
}

// The filtration F^i(M1, M2) = (u^i M2 cap M1 + u M1)/u M1 on the residue
// space M1/u M1, in coordinates of the basis of M1.
template <class Ctx>
FlagFiltration<typename Ctx::Res> pair_filtration(const Ctx& ctx, const DvrLattice<Ctx>& m1,
                                                  const DvrLattice<Ctx>& m2) {
  using Elem = typename Ctx::Elem;
  using Res = typename Ctx::Res;
  auto res = ctx.snf(change_matrix(m1, m2));
  for (bool c : res.capped)
    if (c) fail(errc::precision_exhausted, "pair filtration beyond working precision");
  // left * C * right = D, so the adapted basis is B1 * left^{-1}; its
  // B1-coordinates are the columns of left^{-1}, with exponents a_j = -v_j.
  Mat<Elem> linv = mat_inverse(res.left);
  size_t r = m1.rank();
  std::vector<std::pair<Rat, std::vector<Res>>> gens;
  for (size_t j = 0; j < r; ++j) {
    std::vector<Res> col;
    for (size_t i = 0; i < r; ++i) col.push_back(ctx.residue(linv[i][j]));
    gens.emplace_back(Rat(-res.diag[j]), std::move(col));
  }
  Res model = gens[0].second[0];
  return FlagFiltration<Res>::from_weighted(r, std::move(gens), model);
}

// Basis columns of the lattice M cap W for a K-subspace W given by an RREF
// row basis in ambient coordinates.
template <class Ctx>
Mat<typename Ctx::Elem> lattice_cap_subspace(const Ctx& ctx, const DvrLattice<Ctx>& m,
                                             const Mat<typename Ctx::Elem>& w_rows) {
  using Elem = typename Ctx::Elem;
  size_t r = m.rank();
  size_t d = w_rows.size();
  if (d == r) return m.basis;
  if (d == 0) return {};
  // Column vectors x lie in W iff pi^T x = 0 for the quotient projection pi.
  Mat<Elem> pi = quotient_map(w_rows, r, ctx.one());
  Mat<Elem> q(r - d, std::vector<Elem>(r, ctx.zero()));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r - d; ++j) q[j][i] = pi[i][j];
  auto constraints = mat_mul(q, m.basis);
  auto res = ctx.snf(constraints);
  for (bool c : res.capped)
    if (c) fail(errc::precision_exhausted, "saturation beyond working precision");
  // Kernel of the constraint map in B-coordinates: trailing columns of the
  // unimodular right transform.
  Mat<Elem> out(r, std::vector<Elem>(d, ctx.zero()));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < d; ++j) {
      Elem s = ctx.zero();
      for (size_t l = 0; l < r; ++l) s = s + m.basis[i][l] * res.right[l][r - d + j];
      out[i][j] = s;
    }
  return out;
}

template <class Ctx>
Mat<typename Ctx::Elem> solve_against(const Ctx& ctx, const Mat<typename Ctx::Elem>& sat,
                                      const Mat<typename Ctx::Elem>& cols, size_t r, size_t d,
                                      size_t k);

// A basis of M adapted to the flag F: columns b_j with weights gamma(b_j)
// such that M cap F^{>=gamma} is spanned by the columns of weight >= gamma.
template <class Ctx>
std::pair<Mat<typename Ctx::Elem>, std::vector<Rat>> adapted_lattice_basis(
    const Ctx& ctx, const DvrLattice<Ctx>& m, const FlagFiltration<typename Ctx::Elem>& f) {
  using Elem = typename Ctx::Elem;
  size_t r = m.rank();
  if (f.dim() != r) fail(errc::length_mismatch, "filtration/lattice dimension mismatch");
  Mat<Elem> cols;  // r x (taken so far)
  std::vector<Rat> weights;
  for (size_t level = 0; level < f.breaks().size(); ++level) {
    Mat<Elem> sat = lattice_cap_subspace(ctx, m, f.steps()[level]);
    size_t d = sat.empty() ? 0 : sat[0].size();
    size_t prev = weights.size();
    if (d == prev) continue;
    if (prev == 0) {
      cols = sat;
    } else {
      // Extend the chosen columns to a basis of the larger saturation: write
      // them in sat-coordinates, diagonalize, and take the complementary
      // columns of sat * left^{-1}.
      Mat<Elem> t = solve_against(ctx, sat, cols, r, d, prev);
      auto res = ctx.snf(t);
      Mat<Elem> fresh = mat_mul(sat, mat_inverse(res.left));
      for (size_t i = 0; i < r; ++i) cols[i].resize(d, ctx.zero());
      for (size_t j = prev; j < d; ++j)
        for (size_t i = 0; i < r; ++i) cols[i][j] = fresh[i][j];
    }
    for (size_t j = prev; j < d; ++j) weights.push_back(f.breaks()[level]);
  }
  if (weights.size() != r) fail(errc::no_adapted_basis, "flag does not exhaust the lattice");
  // Verify every level: the change matrix from the saturation basis to the
  // selected leading columns must be unimodular.
  for (size_t level = 0; level < f.breaks().size(); ++level) {
    Mat<Elem> sat = lattice_cap_subspace(ctx, m, f.steps()[level]);
    size_t d = sat.empty() ? 0 : sat[0].size();
    if (d == 0) continue;
    Mat<Elem> lead(r, std::vector<Elem>(d, ctx.zero()));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < d; ++j) lead[i][j] = cols[i][j];
    Mat<Elem> chg = solve_against(ctx, sat, lead, r, d, d);
    if (!is_unimodular(ctx, chg)) fail(errc::no_adapted_basis, "adapted basis verification failed");
  }
  return {cols, weights};
}

// Solves sat * X = cols (sat: r x d of full column rank, cols: r x k with
// columns in the span of sat), returning the d x k solution.
template <class Ctx>
Mat<typename Ctx::Elem> solve_against(const Ctx& ctx, const Mat<typename Ctx::Elem>& sat,
                                      const Mat<typename Ctx::Elem>& cols, size_t r, size_t d,
                                      size_t k) {
  using Elem = typename Ctx::Elem;
  // Augmented row reduction on [sat | cols] read as columns: transpose to
  // rows and use rref-based solving on the square subsystem of pivot rows.
  Mat<Elem> aug(r, std::vector<Elem>(d + k, ctx.zero()));
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < d; ++j) aug[i][j] = sat[i][j];
    for (size_t j = 0; j < k; ++j) aug[i][d + j] = cols[i][j];
  }
  // Gaussian elimination to reduced form on the first d columns.
  size_t row = 0;
  std::vector<size_t> pivot_rows;
  for (size_t c = 0; c < d && row < r; ++c) {
    size_t piv = r;
    for (size_t i = row; i < r; ++i)
      if (!is_zero_elem(aug[i][c])) {
        piv = i;
        break;
      }
    if (piv == r) fail(errc::not_full_rank, "dependent saturation columns");
    std::swap(aug[row], aug[piv]);
    Elem inv = ctx.one() / aug[row][c];
    for (size_t j = 0; j < d + k; ++j) aug[row][j] = aug[row][j] * inv;
    for (size_t i = 0; i < r; ++i) {
      if (i == row || is_zero_elem(aug[i][c])) continue;
      Elem fct = aug[i][c];
      for (size_t j = 0; j < d + k; ++j) aug[i][j] = aug[i][j] - fct * aug[row][j];
    }
    pivot_rows.push_back(row);
    ++row;
  }
  Mat<Elem> x(d, std::vector<Elem>(k, ctx.zero()));
  for (size_t c = 0; c < d; ++c)
    for (size_t j = 0; j < k; ++j) x[c][j] = aug[pivot_rows[c]][d + j];
  return x;
}

// M + F = sum_i u^{-i} (M cap F^i V) for an integer-indexed filtration.
template <class Ctx>
DvrLattice<Ctx> add_filtration(const Ctx& ctx, const DvrLattice<Ctx>& m,
                               const FlagFiltration<typename Ctx::Elem>& f) {
  for (const Rat& b : f.breaks())
    if (rat_den(b) != 1) fail(errc::non_integral_filtration, "addition needs integer breaks");
  auto [cols, weights] = adapted_lattice_basis(ctx, m, f);
  size_t r = m.rank();
  Mat<typename Ctx::Elem> out = cols;
  for (size_t j = 0; j < r; ++j) {
    auto scale = ctx.unif(-static_cast<long>(rat_num(weights[j])));
    for (size_t i = 0; i < r; ++i) out[i][j] = out[i][j] * scale;
  }
  return DvrLattice<Ctx>{std::move(out)};
}

// Gr^gamma_F M = (M cap F^{>=gamma})/(M cap F^{>gamma}) as a lattice in the
// graded piece, in coordinates given by the complement columns of the
// adapted basis at weight gamma.
template <class Ctx>
std::vector<DvrLattice<Ctx>> graded_lattice(const Ctx& ctx, const DvrLattice<Ctx>& m,
                                            const FlagFiltration<typename Ctx::Elem>& f) {
  using Elem = typename Ctx::Elem;
  auto [cols, weights] = adapted_lattice_basis(ctx, m, f);
  size_t r = m.rank();
  std::vector<DvrLattice<Ctx>> out;
  for (size_t level = 0; level < f.breaks().size(); ++level) {
    const Mat<Elem>& step = f.steps()[level];
    size_t d = step.size();
    size_t dprev = level == 0 ? 0 : f.steps()[level - 1].size();
    size_t g = d - dprev;
    // Coordinates on Gr = F^{>=gamma}/F^{>gamma}: express in step
    // coordinates, then project along the previous step.
    Mat<Elem> prev_in_step;
    for (size_t i = 0; i < dprev; ++i)
      prev_in_step.push_back(rref_coords(f.steps()[level - 1][i], step));
    Mat<Elem> pi = quotient_map(rref(prev_in_step), d, ctx.one());
    Mat<Elem> gr(g, std::vector<Elem>(g, ctx.zero()));
    size_t out_col = 0;
    for (size_t j = 0; j < r; ++j) {
      if (weights[j] != f.breaks()[level]) continue;
      std::vector<Elem> amb(r, ctx.zero());
      for (size_t i = 0; i < r; ++i) amb[i] = cols[i][j];
      auto img = vec_mat(rref_coords(amb, step), pi);
      for (size_t i = 0; i < g; ++i) gr[i][out_col] = img[i];
      ++out_col;
    }
    if (out_col != g) fail(errc::no_adapted_basis, "graded piece rank mismatch");
    out.push_back(DvrLattice<Ctx>{std::move(gr)});
  }
  return out;
}

template <class Ctx>
DvrLattice<Ctx> lattice_scale(const Ctx& ctx, const DvrLattice<Ctx>& m, long v) {
  auto s = ctx.unif(v);
  Mat<typename Ctx::Elem> b = m.basis;
  for (auto& row : b)
    for (auto& x : row) x = x * s;
  return DvrLattice<Ctx>{std::move(b)};
}

template <class Ctx>
DvrLattice<Ctx> lattice_direct_sum(const Ctx& ctx, const DvrLattice<Ctx>& a,
                                   const DvrLattice<Ctx>& b) {
  size_t ra = a.rank(), rb = b.rank();
  Mat<typename Ctx::Elem> m(ra + rb, std::vector<typename Ctx::Elem>(ra + rb, ctx.zero()));
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < ra; ++j) m[i][j] = a.basis[i][j];
  for (size_t i = 0; i < rb; ++i)
    for (size_t j = 0; j < rb; ++j) m[ra + i][ra + j] = b.basis[i][j];
  return DvrLattice<Ctx>{std::move(m)};
}

template <class Ctx>
DvrLattice<Ctx> lattice_tensor(const Ctx& ctx, const DvrLattice<Ctx>& a, const DvrLattice<Ctx>& b) {
  size_t ra = a.rank(), rb = b.rank();
  Mat<typename Ctx::Elem> m(ra * rb, std::vector<typename Ctx::Elem>(ra * rb, ctx.zero()));
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < ra; ++j)
      for (size_t k = 0; k < rb; ++k)
        for (size_t l = 0; l < rb; ++l) m[i * rb + k][j * rb + l] = a.basis[i][j] * b.basis[k][l];
  return DvrLattice<Ctx>{std::move(m)};
}

}  // namespace slopeforge
