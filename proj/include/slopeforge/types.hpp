#pragma once

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "slopeforge/rational.hpp"

namespace slopeforge {

// A type: finite weakly decreasing sequence of rationals.  Constructors
// sort, so the cone presentation is canonical and equality is structural.
class TypeVector {
 public:
  TypeVector() = default;
  explicit TypeVector(std::vector<Rat> entries) : e_(std::move(entries)) {
    std::sort(e_.begin(), e_.end(), std::greater<Rat>());
  }

  size_t length() const { return e_.size(); }
  const Rat& operator[](size_t i) const { return e_[i]; }
  const std::vector<Rat>& entries() const { return e_; }

  friend bool operator==(const TypeVector& a, const TypeVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const TypeVector& a, const TypeVector& b) { return !(a == b); }

 private:
  std::vector<Rat> e_;
};

inline Rat degree(const TypeVector& t) {
  Rat s = 0;
  for (size_t i = 0; i < t.length(); ++i) s += t[i];
  return s;
}

// Dominance: all prefix sums of t1 bounded by those of t2, equal total.
inline bool dominance_le(const TypeVector& t1, const TypeVector& t2) {
  if (t1.length() != t2.length()) fail(errc::length_mismatch, "dominance on unequal lengths");
  Rat s1 = 0, s2 = 0;
  for (size_t i = 0; i < t1.length(); ++i) {
    s1 += t1[i];
    s2 += t2[i];
    if (s1 > s2) return false;
  }
  return s1 == s2;
}

inline TypeVector type_add(const TypeVector& a, const TypeVector& b) {
  if (a.length() != b.length()) fail(errc::length_mismatch, "add on unequal lengths");
  std::vector<Rat> e;
  for (size_t i = 0; i < a.length(); ++i) e.push_back(a[i] + b[i]);
  return TypeVector(std::move(e));
}

inline TypeVector type_scale(const Rat& c, const TypeVector& t) {
  if (c <= 0) fail(errc::domain_mismatch, "scale requires c > 0");
  std::vector<Rat> e;
  for (size_t i = 0; i < t.length(); ++i) e.push_back(c * t[i]);
  return TypeVector(std::move(e));
}

// gamma^iota = (-gamma_r, ..., -gamma_1).
inline TypeVector involution(const TypeVector& t) {
  std::vector<Rat> e;
  for (size_t i = 0; i < t.length(); ++i) e.push_back(-t[i]);
  return TypeVector(std::move(e));
}

// Exact squared Euclidean norm; the norm itself is irrational in general.
inline Rat norm_sq(const TypeVector& t) {
  Rat s = 0;
  for (size_t i = 0; i < t.length(); ++i) s += t[i] * t[i];
  return s;
}

// Concatenation: multiset merge, re-sorted.
inline TypeVector concat(const TypeVector& a, const TypeVector& b) {
  std::vector<Rat> e = a.entries();
  e.insert(e.end(), b.entries().begin(), b.entries().end());
  return TypeVector(std::move(e));
}

// Tensor: all pairwise sums.
inline TypeVector tensor(const TypeVector& a, const TypeVector& b) {
  std::vector<Rat> e;
  for (size_t i = 0; i < a.length(); ++i)
    for (size_t j = 0; j < b.length(); ++j) e.push_back(a[i] + b[j]);
  return TypeVector(std::move(e));
}

// k-th exterior power: sums over strictly increasing index k-tuples.
inline TypeVector ext_power(long k, const TypeVector& t) {
  if (k < 1) fail(errc::domain_mismatch, "ext_power requires k >= 1");
  long r = static_cast<long>(t.length());
  if (k > r) return TypeVector{};
  std::vector<Rat> out;
  std::vector<long> idx(k);
  std::function<void(long, long, Rat)> rec = [&](long pos, long start, Rat sum) {
    if (pos == k) {
      out.push_back(sum);
      return;
    }
    for (long i = start; i < r; ++i) rec(pos + 1, i + 1, sum + t[i]);
  };
  rec(0, 0, Rat(0));
  return TypeVector(std::move(out));
}

// k-th symmetric power: sums over weakly increasing index k-tuples.
inline TypeVector sym_power(long k, const TypeVector& t) {
  if (k < 1) fail(errc::domain_mismatch, "sym_power requires k >= 1");
  long r = static_cast<long>(t.length());
  std::vector<Rat> out;
  std::function<void(long, long, Rat)> rec = [&](long pos, long start, Rat sum) {
    if (pos == k) {
      out.push_back(sum);
      return;
    }
    for (long i = start; i < r; ++i) rec(pos + 1, i, sum + t[i]);
  };
  rec(0, 0, Rat(0));
  return TypeVector(std::move(out));
}

// Average over an explicitly supplied orbit, re-sorted.
inline TypeVector sharp_average(const std::vector<TypeVector>& orbit) {
  if (orbit.empty()) fail(errc::domain_mismatch, "sharp of empty orbit");
  size_t r = orbit[0].length();
  std::vector<Rat> e(r, Rat(0));
  for (const auto& t : orbit) {
    if (t.length() != r) fail(errc::length_mismatch, "sharp on unequal lengths");
    for (size_t i = 0; i < r; ++i) e[i] += t[i];
  }
  Rat inv = Rat(1) / Rat(static_cast<long>(orbit.size()));
  for (auto& x : e) x *= inv;
  return TypeVector(std::move(e));
}

inline std::string rat_to_string(const Rat& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// CLI text form: comma-separated rationals in parentheses.
inline std::string type_to_string(const TypeVector& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.length(); ++i) {
    if (i) s += ", ";
    s += rat_to_string(t[i]);
  }
  return s + ")";
}

}  // namespace slopeforge
