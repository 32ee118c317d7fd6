#pragma once

#include <optional>
#include <string>

#include "slopeforge/types.hpp"

namespace slopeforge {

// Completeness provenance of a subobject enumeration.
struct Certificate {
  bool exhaustive = true;
  std::string bound;  // search parameters when not exhaustive

  static Certificate bounded(std::string params) { return Certificate{false, std::move(params)}; }
};

inline Certificate merge(const Certificate& a, const Certificate& b) {
  if (a.exhaustive) return b;
  if (b.exhaustive) return a;
  return Certificate::bounded(a.bound == b.bound ? a.bound : a.bound + "; " + b.bound);
}

// A category handle for the Harder-Narasimhan engine.  Obj is the object
// type; rank is 0 only on the zero object; strict_subobjects(M) enumerates
// proper nonzero subobjects of the top object; contains is inclusion of
// subobjects of the same top object; key is a canonical tie-break string.
template <class Cat>
struct HnFlagOf {
  std::vector<typename Cat::Obj> steps;  // F_1 < ... < F_r = M
  std::vector<Rat> slopes;               // strictly decreasing, one per step
  Certificate cert;
};

template <class Cat>
Rat slope(const Cat& cat, const typename Cat::Obj& m) {
  long r = cat.rank(m);
  if (r == 0) fail(errc::zero_object, "slope of the zero object");
  return cat.degree(m) / Rat(r);
}

template <class Cat>
bool is_semistable(const Cat& cat, const typename Cat::Obj& m) {
  Rat mu = slope(cat, m);
  for (const auto& sub : cat.strict_subobjects(m))
    if (slope(cat, sub) > mu) return false;
  return true;
}

namespace detail {

// Best next step strictly above the current one: maximal relative slope,
// then maximal rank, then canonical key.
template <class Cat>
std::optional<typename Cat::Obj> next_step(const Cat& cat, const typename Cat::Obj& m,
                                           const std::vector<typename Cat::Obj>& subs,
                                           const std::optional<typename Cat::Obj>& current,
                                           long cur_rank, const Rat& cur_deg,
                                           const Certificate& cert) {
  std::optional<typename Cat::Obj> best;
  Rat best_mu;
  long best_rank = 0;
  bool ambiguous = false;
  auto consider = [&](const typename Cat::Obj& cand) {
    long r = cat.rank(cand) - cur_rank;
    if (r <= 0) return;
    if (current && !cat.contains(*current, cand)) return;
    Rat mu = (cat.degree(cand) - cur_deg) / Rat(r);
    if (!best || mu > best_mu || (mu == best_mu && r > best_rank)) {
      best = cand;
      best_mu = mu;
      best_rank = r;
      ambiguous = false;
    } else if (mu == best_mu && r == best_rank && !(cat.contains(cand, *best) &&
                                                    cat.contains(*best, cand))) {
      if (cat.key(cand) < cat.key(*best)) best = cand;
      ambiguous = true;
    }
  };
  for (const auto& sub : subs) consider(sub);
  consider(m);
  if (ambiguous && !cert.exhaustive)
    fail(errc::bounded_search_inconclusive, "incomparable destabilizing candidates at bound " +
                                                cert.bound);
  return best;
}

}  // namespace detail

template <class Cat>
typename Cat::Obj max_destabilizing(const Cat& cat, const typename Cat::Obj& m) {
  if (cat.rank(m) == 0) fail(errc::zero_object, "max_destabilizing of the zero object");
  auto subs = cat.strict_subobjects(m);
  auto best = detail::next_step(cat, m, subs, std::nullopt, 0, Rat(0), cat.certificate(m));
  return *best;
}

template <class Cat>
HnFlagOf<Cat> hn_flag(const Cat& cat, const typename Cat::Obj& m) {
  if (cat.rank(m) == 0) fail(errc::zero_object, "hn_flag of the zero object");
  HnFlagOf<Cat> out;
  out.cert = cat.certificate(m);
  auto subs = cat.strict_subobjects(m);
  std::optional<typename Cat::Obj> current;
  long cur_rank = 0;
  Rat cur_deg(0);
  while (cur_rank < cat.rank(m)) {
    auto step = detail::next_step(cat, m, subs, current, cur_rank, cur_deg, out.cert);
    if (!step) fail(errc::verification_failed, "no admissible next flag step");
    Rat mu = (cat.degree(*step) - cur_deg) / Rat(cat.rank(*step) - cur_rank);
    if (!out.slopes.empty() && !(mu < out.slopes.back()))
      fail(errc::verification_failed, "flag slopes not strictly decreasing");
    out.steps.push_back(*step);
    out.slopes.push_back(mu);
    cur_rank = cat.rank(*step);
    cur_deg = cat.degree(*step);
    current = *step;
  }
  return out;
}

template <class Cat>
TypeVector hn_polygon_type(const Cat& cat, const HnFlagOf<Cat>& flag) {
  std::vector<Rat> entries;
  long prev = 0;
  for (size_t i = 0; i < flag.steps.size(); ++i) {
    long r = cat.rank(flag.steps[i]);
    for (long k = prev; k < r; ++k) entries.push_back(flag.slopes[i]);
    prev = r;
  }
  return TypeVector(std::move(entries));
}

template <class Cat>
TypeVector hn_polygon(const Cat& cat, const typename Cat::Obj& m) {
  return hn_polygon_type(cat, hn_flag(cat, m));
}

}  // namespace slopeforge
