#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "slopeforge/types.hpp"

namespace slopeforge {

// A finite Galois set: embedding labels 0..size-1, a permutation group given
// by generators, and a distinguished embedding iota0.
struct GaloisSet {
  size_t size = 0;
  std::vector<std::vector<size_t>> action;
  size_t iota0 = 0;
};

inline bool operator==(const GaloisSet& a, const GaloisSet& b) {
  return a.size == b.size && a.action == b.action && a.iota0 == b.iota0;
}
inline bool operator!=(const GaloisSet& a, const GaloisSet& b) { return !(a == b); }

inline GaloisSet galois_make(size_t size, std::vector<std::vector<size_t>> action, size_t iota0) {
  if (size == 0) fail(errc::domain_mismatch, "empty galois set");
  if (iota0 >= size) fail(errc::domain_mismatch, "distinguished embedding out of range");
  for (const auto& g : action) {
    if (g.size() != size) fail(errc::length_mismatch, "generator length mismatch");
    std::vector<bool> seen(size, false);
    for (size_t v : g) {
      if (v >= size || seen[v]) fail(errc::domain_mismatch, "generator is not a permutation");
      seen[v] = true;
    }
  }
  return GaloisSet{size, std::move(action), iota0};
}

// The unramified case: one cyclic generator.
inline GaloisSet galois_cyclic(size_t size, size_t iota0 = 0) {
  std::vector<size_t> shift(size);
  for (size_t i = 0; i < size; ++i) shift[i] = (i + 1) % size;
  return galois_make(size, {std::move(shift)}, iota0);
}

// An element of X*(T_E) tensor Q: a function on the embeddings.
struct CharacterFunction {
  GaloisSet base;
  std::vector<Rat> values;
};

inline CharacterFunction cf_make(GaloisSet base, std::vector<Rat> values) {
  if (values.size() != base.size) fail(errc::length_mismatch, "character value list mismatch");
  return CharacterFunction{std::move(base), std::move(values)};
}

// Closure of the generator list: every group element as a permutation.
inline std::vector<std::vector<size_t>> galois_group(const GaloisSet& s) {
  std::vector<size_t> id(s.size);
  for (size_t i = 0; i < s.size; ++i) id[i] = i;
  std::vector<std::vector<size_t>> group{id};
  for (size_t k = 0; k < group.size(); ++k)
    for (const auto& g : s.action) {
      std::vector<size_t> h(s.size);
      for (size_t i = 0; i < s.size; ++i) h[i] = g[group[k][i]];
      if (std::find(group.begin(), group.end(), h) == group.end()) group.push_back(std::move(h));
    }
  return group;
}

// (sigma . f)(iota) = f(sigma^{-1} iota).
inline CharacterFunction cf_act(const std::vector<size_t>& sigma, const CharacterFunction& f) {
  std::vector<Rat> out(f.base.size);
  for (size_t i = 0; i < f.base.size; ++i) out[sigma[i]] = f.values[i];
  return CharacterFunction{f.base, std::move(out)};
}

// mu_E: the indicator of the distinguished embedding.
inline CharacterFunction hodge_cochar(const GaloisSet& s) {
  std::vector<Rat> v(s.size, Rat(0));
  v[s.iota0] = 1;
  return CharacterFunction{s, std::move(v)};
}

// nu_E: the average of the Galois orbit of mu_E; Haar integration in the
// field case, which is exactly transitivity of the action.
inline CharacterFunction newton_cochar(const GaloisSet& s) {
  CharacterFunction mu = hodge_cochar(s);
  std::vector<std::vector<Rat>> orbit;
  for (const auto& sigma : galois_group(s)) {
    auto v = cf_act(sigma, mu).values;
    if (std::find(orbit.begin(), orbit.end(), v) == orbit.end()) orbit.push_back(std::move(v));
  }
  if (orbit.size() != s.size)
    fail(errc::non_transitive_action, "newton cocharacter needs a transitive action");
  std::vector<Rat> avg(s.size, Rat(0));
  for (const auto& v : orbit)
    for (size_t i = 0; i < s.size; ++i) avg[i] += v[i];
  for (auto& x : avg) x /= Rat(static_cast<long>(orbit.size()));
  return CharacterFunction{s, std::move(avg)};
}

enum class WeightKind { hodge, newton };

// A morphism x: T_E -> GL_n is a list of weight characters f_1..f_n; its
// Hodge type is the sorted list (f_i(iota0)) and its Newton type the sorted
// list of Haar averages.
inline TypeVector push_to_weights(const std::vector<CharacterFunction>& x, WeightKind which) {
  if (x.empty()) fail(errc::domain_mismatch, "empty weight list");
  for (const auto& f : x)
    if (f.base != x[0].base) fail(errc::base_mismatch, "weights over different galois sets");
  const GaloisSet& s = x[0].base;
  std::vector<Rat> entries;
  for (const auto& f : x) {
    if (which == WeightKind::hodge) {
      entries.push_back(f.values[s.iota0]);
    } else {
      Rat sum = 0;
      for (const Rat& v : f.values) sum += v;
      entries.push_back(sum / Rat(static_cast<long>(s.size)));
    }
  }
  return TypeVector(std::move(entries));
}

// [x . nu] = [x . mu]^#: the Galois average of the Hodge weights is taken at
// the cocharacter level, where entries stay attached to their weight index,
// and is pushed to a type only at the end.  Sorting each orbit member first
// would misgrade Galois-permuted weight sets.
inline bool is_ordinary_abelian(const std::vector<CharacterFunction>& x) {
  if (x.empty()) fail(errc::domain_mismatch, "empty weight list");
  for (const auto& f : x)
    if (f.base != x[0].base) fail(errc::base_mismatch, "weights over different galois sets");
  const GaloisSet& s = x[0].base;
  auto group = galois_group(s);
  std::vector<Rat> sharp(x.size(), Rat(0));
  for (const auto& sigma : group) {
    // sigma^{-1} iota0 is the preimage of iota0 under sigma
    size_t pre = 0;
    while (sigma[pre] != s.iota0) ++pre;
    for (size_t i = 0; i < x.size(); ++i) sharp[i] += x[i].values[pre];
  }
  for (auto& v : sharp) v /= Rat(static_cast<long>(group.size()));
  return push_to_weights(x, WeightKind::newton) == TypeVector(std::move(sharp));
}

}  // namespace slopeforge
