#pragma once

#include <algorithm>
#include <map>
#include <utility>

#include "slopeforge/linalg.hpp"
#include "slopeforge/types.hpp"

namespace slopeforge {

// A decreasing, separated, exhaustive filtration F^{>=gamma} on K^r with
// finitely many breaks gamma_1 > ... > gamma_s. Step i stores an RREF row
// basis of F^{>=gamma_i}; steps strictly grow and the last one is all of K^r.
template <class K>
class FlagFiltration {
 public:
  FlagFiltration(size_t dim, std::vector<Rat> breaks, std::vector<Mat<K>> steps, K model)
      : dim_(dim), model_(std::move(model)) {
    if (breaks.size() != steps.size())
      fail(errc::length_mismatch, "filtration breaks/steps mismatch");
    size_t prev = 0;
    for (size_t i = 0; i < steps.size(); ++i) {
      if (i > 0 && !(breaks[i] < breaks[i - 1]))
        fail(errc::domain_mismatch, "filtration breaks not strictly decreasing");
      Mat<K> w = rref(steps[i]);
      if (w.size() <= prev && i > 0)
        fail(errc::domain_mismatch, "filtration steps not strictly increasing");
      if (i > 0)
        for (const auto& row : steps_.back())
          if (!span_member(row, w)) fail(errc::domain_mismatch, "filtration steps not nested");
      prev = w.size();
      breaks_.push_back(breaks[i]);
      steps_.push_back(std::move(w));
    }
    if (steps_.empty() || steps_.back().size() != dim_)
      fail(errc::domain_mismatch, "filtration not exhaustive");
  }

  // Builds the filtration generated by weighted vectors: F^{>=gamma} is the
  // span of all vectors of weight >= gamma.
  static FlagFiltration from_weighted(size_t dim, std::vector<std::pair<Rat, std::vector<K>>> gens,
                                      K model) {
    std::map<Rat, Mat<K>, std::greater<Rat>> by_weight;
    for (auto& [w, v] : gens) by_weight[w].push_back(std::move(v));
    std::vector<Rat> breaks;
    std::vector<Mat<K>> steps;
    Mat<K> acc;
    for (auto& [w, rows] : by_weight) {
      acc.insert(acc.end(), rows.begin(), rows.end());
      acc = rref(acc);
      if (!breaks.empty() && acc.size() == steps.back().size()) continue;
      breaks.push_back(w);
      steps.push_back(acc);
    }
    return FlagFiltration(dim, std::move(breaks), std::move(steps), std::move(model));
  }

  size_t dim() const { return dim_; }
  const K& model() const { return model_; }
  const std::vector<Rat>& breaks() const { return breaks_; }
  const std::vector<Mat<K>>& steps() const { return steps_; }

  // F^{>=gamma} for an arbitrary index.
  const Mat<K>& at_least(const Rat& gamma) const {
    static const Mat<K> empty;
    const Mat<K>* best = &empty;
    for (size_t i = 0; i < breaks_.size(); ++i)
      if (breaks_[i] >= gamma) best = &steps_[i];
    return *best;
  }

  // Adapted basis: vectors v with weights gamma(v), step bases extending one
  // another through the flag.
  std::vector<std::pair<Rat, std::vector<K>>> adapted_basis() const {
    std::vector<std::pair<Rat, std::vector<K>>> out;
    Mat<K> seen;
    for (size_t i = 0; i < steps_.size(); ++i) {
      for (const auto& row : steps_[i]) {
        auto rem = span_reduce(row, seen);
        bool zero = true;
        for (const auto& x : rem) zero = zero && is_zero_elem(x);
        if (zero) continue;
        seen = span_sum(seen, Mat<K>{rem});
        out.emplace_back(breaks_[i], rem);
      }
    }
    return out;
  }

 private:
  size_t dim_;
  K model_;
  std::vector<Rat> breaks_;
  std::vector<Mat<K>> steps_;
};

template <class K>
FlagFiltration<K> trivial_filtration(size_t dim, const K& model, const Rat& at = Rat(0)) {
  Mat<K> full;
  for (size_t i = 0; i < dim; ++i) {
    std::vector<K> e(dim, zero_like(model));
    e[i] = one_like(model);
    full.push_back(std::move(e));
  }
  return FlagFiltration<K>(dim, {at}, {full}, model);
}

template <class K>
TypeVector type_of(const FlagFiltration<K>& f) {
  std::vector<Rat> entries;
  size_t prev = 0;
  for (size_t i = 0; i < f.breaks().size(); ++i) {
    size_t d = f.steps()[i].size();
    for (size_t k = prev; k < d; ++k) entries.push_back(f.breaks()[i]);
    prev = d;
  }
  return TypeVector(std::move(entries));
}

// Coordinates of a vector lying in the row span of an RREF basis.
template <class K>
std::vector<K> rref_coords(const std::vector<K>& v, const Mat<K>& basis_rref) {
  std::vector<K> coords;
  for (const auto& row : basis_rref) {
    size_t lead = row.size();
    for (size_t j = 0; j < row.size(); ++j)
      if (!is_zero_elem(row[j])) {
        lead = j;
        break;
      }
    coords.push_back(v[lead]);
  }
  return coords;
}

// Induced filtrations on a subspace W (in W-coordinates) and on V/W.
template <class K>
std::pair<FlagFiltration<K>, FlagFiltration<K>> induce(const FlagFiltration<K>& f,
                                                       const Mat<K>& w_raw) {
  Mat<K> w = rref(w_raw);
  const K model = f.model();
  size_t q = f.dim() - w.size();
  Mat<K> pi = quotient_map(w, f.dim(), model);

  std::vector<std::pair<Rat, std::vector<K>>> sub_gens, quot_gens;
  for (size_t i = 0; i < f.breaks().size(); ++i) {
    Mat<K> inter = span_intersect(f.steps()[i], w, f.dim(), model);
    for (const auto& v : inter) sub_gens.emplace_back(f.breaks()[i], rref_coords(v, w));
    for (const auto& v : f.steps()[i]) {
      auto img = vec_mat(v, pi);
      bool zero = true;
      for (const auto& x : img) zero = zero && is_zero_elem(x);
      if (!zero) quot_gens.emplace_back(f.breaks()[i], img);
    }
  }
  if (w.empty()) fail(errc::domain_mismatch, "induce on the zero subspace");
  auto fw = FlagFiltration<K>::from_weighted(w.size(), std::move(sub_gens), model);
  if (q == 0)
    return {std::move(fw), FlagFiltration<K>(0, {Rat(0)}, {Mat<K>{}}, model)};
  return {std::move(fw), FlagFiltration<K>::from_weighted(q, std::move(quot_gens), model)};
}

template <class K>
FlagFiltration<K> combine_sum(const FlagFiltration<K>& a, const FlagFiltration<K>& b) {
  const K model = a.model();
  size_t dim = a.dim() + b.dim();
  std::vector<std::pair<Rat, std::vector<K>>> gens;
  for (const auto& [w, v] : a.adapted_basis()) {
    std::vector<K> e(dim, zero_like(model));
    for (size_t j = 0; j < a.dim(); ++j) e[j] = v[j];
    gens.emplace_back(w, std::move(e));
  }
  for (const auto& [w, v] : b.adapted_basis()) {
    std::vector<K> e(dim, zero_like(model));
    for (size_t j = 0; j < b.dim(); ++j) e[a.dim() + j] = v[j];
    gens.emplace_back(w, std::move(e));
  }
  return FlagFiltration<K>::from_weighted(dim, std::move(gens), model);
}

template <class K>
FlagFiltration<K> combine_tensor(const FlagFiltration<K>& a, const FlagFiltration<K>& b) {
  const K model = a.model();
  size_t dim = a.dim() * b.dim();
  std::vector<std::pair<Rat, std::vector<K>>> gens;
  for (const auto& [wa, va] : a.adapted_basis())
    for (const auto& [wb, vb] : b.adapted_basis()) {
      std::vector<K> e(dim, zero_like(model));
      for (size_t i = 0; i < a.dim(); ++i)
        for (size_t j = 0; j < b.dim(); ++j) e[i * b.dim() + j] = va[i] * vb[j];
      gens.emplace_back(wa + wb, std::move(e));
    }
  return FlagFiltration<K>::from_weighted(dim, std::move(gens), model);
}

namespace detail {

inline void index_tuples(long r, long k, long start, bool strict, std::vector<long>& cur,
                         std::vector<std::vector<long>>& out) {
  if (static_cast<long>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (long i = start; i < r; ++i) {
    cur.push_back(i);
    index_tuples(r, k, strict ? i + 1 : i, strict, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<long>> tuples(long r, long k, bool strict) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur;
  index_tuples(r, k, 0, strict, cur, out);
  return out;
}

template <class K>
K tuple_minor(const Mat<K>& rows, const std::vector<long>& row_idx,
              const std::vector<long>& col_idx) {
  Mat<K> sub;
  for (long i : row_idx) {
    std::vector<K> r;
    for (long j : col_idx) r.push_back(rows[i][j]);
    sub.push_back(std::move(r));
  }
  return mat_det(sub);
}

}  // namespace detail

template <class K>
FlagFiltration<K> combine_ext(long k, const FlagFiltration<K>& f) {
  const K model = f.model();
  long r = static_cast<long>(f.dim());
  auto basis = f.adapted_basis();
  Mat<K> rows;
  for (const auto& [w, v] : basis) rows.push_back(v);
  auto cols = detail::tuples(r, k, true);
  std::vector<std::pair<Rat, std::vector<K>>> gens;
  for (const auto& T : cols) {
    Rat w(0);
    for (long t : T) w += basis[t].first;
    std::vector<K> e;
    for (const auto& C : cols) e.push_back(detail::tuple_minor(rows, T, C));
    gens.emplace_back(w, std::move(e));
  }
  return FlagFiltration<K>::from_weighted(cols.size(), std::move(gens), model);
}

template <class K>
FlagFiltration<K> combine_sym(long k, const FlagFiltration<K>& f) {
  const K model = f.model();
  long r = static_cast<long>(f.dim());
  auto basis = f.adapted_basis();
  auto monos = detail::tuples(r, k, false);
  std::map<std::vector<long>, size_t> mono_index;
  for (size_t i = 0; i < monos.size(); ++i) mono_index[monos[i]] = i;
  std::vector<std::pair<Rat, std::vector<K>>> gens;
  for (const auto& T : monos) {
    Rat w(0);
    for (long t : T) w += basis[t].first;
    // Expand the product of the linear forms basis[T_0] * ... * basis[T_{k-1}]
    // in the monomial basis of Sym^k.
    std::map<std::vector<long>, K> poly{{{}, one_like(model)}};
    for (long t : T) {
      std::map<std::vector<long>, K> next;
      for (const auto& [m, c] : poly)
        for (long j = 0; j < r; ++j) {
          const K& x = basis[t].second[j];
          if (is_zero_elem(x)) continue;
          std::vector<long> m2 = m;
          m2.insert(std::upper_bound(m2.begin(), m2.end(), j), j);
          auto it = next.find(m2);
          if (it == next.end())
            next.emplace(std::move(m2), c * x);
          else
            it->second = it->second + c * x;
        }
      poly = std::move(next);
    }
    std::vector<K> e(monos.size(), zero_like(model));
    for (const auto& [m, c] : poly) e[mono_index.at(m)] = c;
    gens.emplace_back(w, std::move(e));
  }
  return FlagFiltration<K>::from_weighted(monos.size(), std::move(gens), model);
}

}  // namespace slopeforge
