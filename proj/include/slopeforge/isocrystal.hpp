#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slopeforge/hn.hpp"
#include "slopeforge/lattice.hpp"

namespace slopeforge {

// A trivialized isocrystal (D, sigma_D) on Q_p^r: sigma_D = b ∘ sigma with b
// an invertible rational matrix (p-power denominators allowed).  s is the
// order of the residue Frobenius; rational coefficients are sigma-fixed, so
// the s-fold norm product collapses to b^s.
struct Isocrystal {
  Int p;
  size_t r = 0;
  Mat<Rat> b;
  long s = 1;
};

// A p-adic lattice in the isocrystal's space, spanned by the columns of an
// invertible rational basis matrix.
struct WittLattice {
  Mat<Rat> basis;
};

namespace iso_detail {

inline QRatFun qconst(const Rat& x) { return qrf(q_const(x)); }

inline Mat<QRatFun> to_elem(const Mat<Rat>& a) {
  Mat<QRatFun> out(a.size(), std::vector<QRatFun>(a.empty() ? 0 : a[0].size(), qrf_zero()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] = qconst(a[i][j]);
  return out;
}

inline Rat to_rat(const QRatFun& x) {
  if (x.is_zero()) return Rat(0);
  if (q_deg(x.num) > 0 || q_deg(x.den) > 0)
    fail(errc::domain_mismatch, "witt lattice entries must be constants");
  return x.num[0] / x.den[0];
}

inline std::optional<Rat> rat_sqrt(const Rat& x) {
  if (x < 0) return std::nullopt;
  Int n = rat_num(x), d = rat_den(x);
  Int sn = sqrt(n), sd = sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rat(sn) / Rat(sd);
}

// Rational eigenvalues with eigenspace row bases when b splits with full
// eigenspaces; nullopt otherwise.  Exact for diagonal matrices of any rank
// and for rank <= 2.
inline std::optional<std::vector<std::pair<Rat, Mat<Rat>>>> eigen_split(const Mat<Rat>& b) {
  size_t r = b.size();
  bool diag = true;
  for (size_t i = 0; i < r && diag; ++i)
    for (size_t j = 0; j < r; ++j)
      if (i != j && b[i][j] != 0) diag = false;
  std::vector<std::pair<Rat, Mat<Rat>>> out;
  if (diag) {
    for (size_t i = 0; i < r; ++i) {
      std::vector<Rat> e(r, Rat(0));
      e[i] = 1;
      bool found = false;
      for (auto& [lam, space] : out)
        if (lam == b[i][i]) {
          space.push_back(e);
          found = true;
        }
      if (!found) out.push_back({b[i][i], {e}});
    }
    return out;
  }
  if (r != 2) return std::nullopt;
  Rat tr = b[0][0] + b[1][1];
  Rat det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
  auto sq = rat_sqrt(tr * tr - Rat(4) * det);
  if (!sq) return std::nullopt;
  if (*sq == 0) return std::nullopt;  // repeated eigenvalue, not scalar
  const std::vector<Rat> roots{Rat((tr + *sq) / 2), Rat((tr - *sq) / 2)};
  for (const Rat& lam : roots) {
    Mat<Rat> a = b;
    a[0][0] -= lam;
    a[1][1] -= lam;
    std::vector<Rat> row = (a[0][0] != 0 || a[0][1] != 0) ? a[0] : a[1];
    out.push_back({lam, {{row[1], -row[0]}}});
  }
  return out;
}

}  // namespace iso_detail

inline Isocrystal iso_make(Int p, Mat<Rat> b, long s = 1) {
  if (p < 2) fail(errc::domain_mismatch, "prime must be at least 2");
  if (s < 1) fail(errc::domain_mismatch, "residue frobenius order must be positive");
  size_t r = b.size();
  if (r == 0) fail(errc::domain_mismatch, "empty frobenius matrix");
  for (const auto& row : b)
    if (row.size() != r) fail(errc::length_mismatch, "frobenius matrix not square");
  if (mat_det(b) == 0) fail(errc::not_full_rank, "frobenius matrix must be invertible");
  return Isocrystal{std::move(p), r, std::move(b), s};
}

inline WittLattice standard_witt(size_t r) {
  return WittLattice{mat_identity<Rat>(r, Rat(1))};
}

inline DvrLattice<PContext> witt_lattice(const WittLattice& y) {
  return DvrLattice<PContext>{iso_detail::to_elem(y.basis)};
}

inline bool witt_eq(const Int& p, const WittLattice& a, const WittLattice& b) {
  return lattice_eq(PContext{p}, witt_lattice(a), witt_lattice(b));
}

// Newton type: p-adic Newton-polygon slopes of the characteristic polynomial
// of the norm product, divided by s and sorted decreasing.
inline TypeVector newton_type(const Isocrystal& d) {
  Mat<Rat> norm = d.b;
  for (long k = 1; k < d.s; ++k) norm = mat_mul(norm, d.b);
  QPoly cp = char_poly(norm);
  std::vector<std::pair<long, long>> pts;  // (index, valuation)
  for (size_t i = 0; i < cp.size(); ++i)
    if (cp[i] != 0) pts.emplace_back(static_cast<long>(i), vp_rat(cp[i], d.p));
  std::vector<std::pair<long, long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& o = hull[hull.size() - 2];
      auto& a = hull.back();
      if ((a.first - o.first) * (pt.second - o.second) -
              (a.second - o.second) * (pt.first - o.first) <=
          0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  std::vector<Rat> slopes;
  for (size_t k = 1; k < hull.size(); ++k) {
    long w = hull[k].first - hull[k - 1].first;
    Rat v = Rat(hull[k - 1].second - hull[k].second, w) / d.s;
    for (long j = 0; j < w; ++j) slopes.push_back(v);
  }
  return TypeVector(std::move(slopes));
}

inline long kottwitz_point(const Isocrystal& d) { return vp_rat(mat_det(d.b), d.p); }

// t_H(y) = Pos(y, sigma_D y).
inline TypeVector lattice_hodge_type(const Isocrystal& d, const WittLattice& y) {
  PContext ctx{d.p};
  DvrLattice<PContext> m1 = witt_lattice(y);
  DvrLattice<PContext> m2{iso_detail::to_elem(mat_mul(d.b, y.basis))};
  return pos(ctx, m1, m2);
}

// Mazur's inequality t_N^iota(D) <= t_H(y).
inline bool mazur_check(const Isocrystal& d, const WittLattice& y) {
  return dominance_le(involution(newton_type(d)), lattice_hodge_type(d, y));
}

// All lattices y with p^B * standard <= y <= p^(-B) * standard, by Hermite
// representatives (unique: upper triangular, p-power diagonal, reduced
// off-diagonal entry).
inline std::vector<WittLattice> witt_window(const Int& p, size_t r, long bound) {
  if (r > 2 || bound > 2 || bound < 0)
    fail(errc::search_budget_exceeded, "lattice window enumeration needs rank <= 2, bound <= 2");
  std::vector<WittLattice> out;
  long w = 2 * bound;
  if (r == 1) {
    for (long a = 0; a <= w; ++a) out.push_back(WittLattice{{{rat_p_pow(p, a - bound)}}});
    return out;
  }
  for (long a = 0; a <= w; ++a) {
    Int pa = 1;
    for (long k = 0; k < a; ++k) pa *= p;
    for (long dd = 0; dd <= w; ++dd)
      for (Int c = 0; c < pa; ++c) {
        if (c != 0 && vp_int(c, p) + w - dd < a) continue;
        out.push_back(WittLattice{{{rat_p_pow(p, a - bound), Rat(c) * rat_p_pow(p, -bound)},
                                   {Rat(0), rat_p_pow(p, dd - bound)}}});
      }
  }
  return out;
}

// The nonemptiness criterion for L(D, mu): t_N^iota <= mu and kappa = -deg mu.
inline bool gashi_criterion(const Isocrystal& d, const TypeVector& mu) {
  if (mu.length() != d.r) fail(errc::length_mismatch, "cocharacter length mismatch");
  return Rat(kottwitz_point(d)) == -degree(mu) && dominance_le(involution(newton_type(d)), mu);
}

// L(D, mu): the window lattices with t_H(y) = mu.
inline std::vector<WittLattice> lattice_set(const Isocrystal& d, const TypeVector& mu,
                                            long bound) {
  if (mu.length() != d.r) fail(errc::length_mismatch, "cocharacter length mismatch");
  for (size_t i = 0; i < mu.length(); ++i)
    if (rat_den(mu[i]) != 1) fail(errc::domain_mismatch, "cocharacter must be integral");
  std::vector<WittLattice> out;
  for (auto& y : witt_window(d.p, d.r, bound))
    if (lattice_hodge_type(d, y) == mu) out.push_back(std::move(y));
  return out;
}

inline bool is_mu_ordinary(const Isocrystal& d, const TypeVector& mu) {
  return !lattice_set(d, mu, 2).empty() && involution(newton_type(d)) == mu;
}

// A filtered isocrystal: the Hodge flag lives on the reference space and has
// integer breaks.
struct FilteredIsocrystal {
  Isocrystal d;
  FlagFiltration<Rat> hodge;
};

inline FilteredIsocrystal fi_make(Isocrystal d, FlagFiltration<Rat> hodge) {
  if (hodge.dim() != d.r) fail(errc::length_mismatch, "hodge flag dimension mismatch");
  for (const Rat& b : hodge.breaks())
    if (rat_den(b) != 1) fail(errc::non_integral_filtration, "hodge flag needs integer breaks");
  return FilteredIsocrystal{std::move(d), std::move(hodge)};
}

inline TypeVector fi_hodge_type(const FilteredIsocrystal& f) { return type_of(f.hodge); }

namespace iso_detail {

inline size_t span_dim(const Mat<Rat>& a) { return rref(a).size(); }

inline size_t intersection_dim(const Mat<Rat>& a, const Mat<Rat>& b) {
  Mat<Rat> stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  return span_dim(a) + span_dim(b) - span_dim(stacked);
}

// deg t_H of a subspace with the induced flag.
inline Rat sub_hodge_deg(const FlagFiltration<Rat>& hodge, const Mat<Rat>& w) {
  Rat deg = 0;
  size_t prev = 0;
  for (size_t i = 0; i < hodge.breaks().size(); ++i) {
    size_t cur = intersection_dim(w, hodge.steps()[i]);
    deg += hodge.breaks()[i] * Rat(static_cast<long>(cur - prev));
    prev = cur;
  }
  return deg;
}

// deg t_N of a stable line: the valuation of its Frobenius eigenvalue.
inline Rat line_newton_deg(const Isocrystal& d, const std::vector<Rat>& v) {
  size_t i = 0;
  while (i < v.size() && v[i] == 0) ++i;
  Rat bv = 0;
  for (size_t j = 0; j < v.size(); ++j) bv += d.b[i][j] * v[j];
  return Rat(vp_rat(bv / v[i], d.p)) / d.s;
}

// Proper nonzero sigma_D-stable subspaces (rank 2: b-stable lines; for a
// scalar b every line is stable, and one representative per flag weight
// settles every degree question).
inline std::vector<Mat<Rat>> stable_lines(const FilteredIsocrystal& f) {
  const Mat<Rat>& b = f.d.b;
  std::vector<Mat<Rat>> out;
  if (f.d.r != 2) return out;
  if (b[0][1] == 0 && b[1][0] == 0 && b[0][0] == b[1][1]) {
    for (const auto& [w, v] : f.hodge.adapted_basis()) {
      (void)w;
      out.push_back(rref(Mat<Rat>{v}));
    }
    return out;
  }
  Rat tr = b[0][0] + b[1][1];
  Rat det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
  auto sq = rat_sqrt(tr * tr - Rat(4) * det);
  if (!sq) return out;
  std::vector<Rat> roots{(tr + *sq) / 2};
  if (*sq != 0) roots.push_back((tr - *sq) / 2);
  for (const Rat& lam : roots) {
    Mat<Rat> a = b;
    a[0][0] -= lam;
    a[1][1] -= lam;
    std::vector<Rat> row = (a[0][0] != 0 || a[0][1] != 0) ? a[0] : a[1];
    out.push_back(rref(Mat<Rat>{{row[1], -row[0]}}));
  }
  return out;
}

// Category handle for the Fargues HN structure: deg = -t_H on sub-filtered-
// isocrystals.  Subobjects in the weakly admissible category are the stable
// lines that are themselves weakly admissible (hodge degree = newton degree).
struct FiCat {
  using Obj = Mat<Rat>;
  const FilteredIsocrystal* f;

  long rank(const Obj& m) const { return static_cast<long>(m.size()); }
  Rat degree(const Obj& m) const { return -sub_hodge_deg(f->hodge, m); }
  std::vector<Obj> strict_subobjects(const Obj&) const {
    std::vector<Obj> out;
    for (auto& line : stable_lines(*f))
      if (sub_hodge_deg(f->hodge, line) == line_newton_deg(f->d, line[0]))
        out.push_back(std::move(line));
    return out;
  }
  bool contains(const Obj& a, const Obj& b) const {
    for (const auto& row : a)
      if (!span_member(row, b)) return false;
    return true;
  }
  std::string key(const Obj& m) const {
    std::ostringstream os;
    for (const auto& row : m)
      for (const auto& x : row) os << x << ",";
    return os.str();
  }
  Certificate certificate(const Obj&) const { return Certificate{}; }
};

}  // namespace iso_detail

inline Rat fi_deg(const FilteredIsocrystal& f) {
  return degree(fi_hodge_type(f)) - degree(newton_type(f.d));
}

// deg(D) = 0 and deg(D') <= 0 for every stable subspace with its induced
// flag; the subobject enumeration is exhaustive for rank <= 2.
inline bool fi_is_weakly_admissible(const FilteredIsocrystal& f) {
  if (f.d.r > 2)
    fail(errc::search_budget_exceeded, "sub-isocrystal enumeration needs rank <= 2");
  if (fi_deg(f) != 0) return false;
  for (const auto& line : iso_detail::stable_lines(f))
    if (iso_detail::sub_hodge_deg(f.hodge, line) - iso_detail::line_newton_deg(f.d, line[0]) > 0)
      return false;
  return true;
}

struct FiFargues {
  std::vector<Mat<Rat>> steps;
  std::vector<Rat> slopes;
  TypeVector polygon;
  Certificate cert;
};

inline FiFargues fi_fargues(const FilteredIsocrystal& f) {
  if (!fi_is_weakly_admissible(f))
    fail(errc::not_weakly_admissible, "fargues filtration needs a weakly admissible input");
  iso_detail::FiCat cat{&f};
  auto flag = hn_flag(cat, mat_identity<Rat>(f.d.r, Rat(1)));
  return FiFargues{flag.steps, flag.slopes, hn_polygon_type(cat, flag), flag.cert};
}

// Phi_cris^s(y) = y + s*F_N^iota(D), via lattice addition with the opposed
// integer filtration built from the Newton graduation.
inline WittLattice phi_cris(const Isocrystal& d, const WittLattice& y, long s) {
  if (s < 1) fail(errc::domain_mismatch, "phi_cris exponent must be positive");
  auto eig = iso_detail::eigen_split(d.b);
  if (!eig) fail(errc::not_diagonalizable, "newton graduation needs a rationally split frobenius");
  std::vector<std::pair<Rat, std::vector<QRatFun>>> gens;
  for (const auto& [lam, space] : *eig) {
    Rat gamma = Rat(vp_rat(lam, d.p)) / d.s;
    Rat weight = Rat(-s) * gamma;
    if (rat_den(weight) != 1)
      fail(errc::non_integral_filtration, "s times the newton slopes must be integral");
    for (const auto& row : space) {
      std::vector<QRatFun> v;
      for (const Rat& x : row) v.push_back(iso_detail::qconst(x));
      gens.emplace_back(weight, std::move(v));
    }
  }
  PContext ctx{d.p};
  auto flag = FlagFiltration<QRatFun>::from_weighted(d.r, std::move(gens), qrf_one());
  auto out = add_filtration(ctx, witt_lattice(y), flag);
  Mat<Rat> basis(d.r, std::vector<Rat>(d.r, Rat(0)));
  for (size_t i = 0; i < d.r; ++i)
    for (size_t j = 0; j < d.r; ++j) basis[i][j] = iso_detail::to_rat(out.basis[i][j]);
  return WittLattice{std::move(basis)};
}

}  // namespace slopeforge
