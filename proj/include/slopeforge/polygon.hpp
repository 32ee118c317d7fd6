#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "slopeforge/types.hpp"

namespace slopeforge {

// Concave piecewise-linear function from (0,0); breakpoints have strictly
// increasing abscissas (not necessarily integral) and weakly decreasing
// slopes.
class PolygonFunction {
 public:
  PolygonFunction() : pts_{{Rat(0), Rat(0)}} {}
  explicit PolygonFunction(std::vector<std::pair<Rat, Rat>> pts) : pts_(std::move(pts)) {
    if (pts_.empty() || pts_[0].first != 0 || pts_[0].second != 0)
      fail(errc::domain_mismatch, "polygon must start at (0,0)");
    for (size_t i = 1; i < pts_.size(); ++i)
      if (pts_[i].first <= pts_[i - 1].first)
        fail(errc::domain_mismatch, "polygon abscissas must increase");
    // Drop interior points where the slope does not change.
    std::vector<std::pair<Rat, Rat>> keep;
    for (size_t i = 0; i < pts_.size(); ++i) {
      while (keep.size() >= 2) {
        const auto& a = keep[keep.size() - 2];
        const auto& b = keep[keep.size() - 1];
        if ((b.second - a.second) * (pts_[i].first - b.first) ==
            (pts_[i].second - b.second) * (b.first - a.first))
          keep.pop_back();
        else
          break;
      }
      keep.push_back(pts_[i]);
    }
    pts_ = std::move(keep);
    for (size_t i = 2; i < pts_.size(); ++i) {
      Rat s1 = (pts_[i - 1].second - pts_[i - 2].second) / (pts_[i - 1].first - pts_[i - 2].first);
      Rat s2 = (pts_[i].second - pts_[i - 1].second) / (pts_[i].first - pts_[i - 1].first);
      if (s2 > s1) fail(errc::domain_mismatch, "polygon not concave");
    }
  }

  const std::vector<std::pair<Rat, Rat>>& breakpoints() const { return pts_; }
  Rat domain_end() const { return pts_.back().first; }
  Rat value_end() const { return pts_.back().second; }

  Rat operator()(const Rat& x) const {
    if (x < 0 || x > domain_end()) fail(errc::domain_mismatch, "polygon evaluated outside domain");
    for (size_t i = 1; i < pts_.size(); ++i) {
      if (x <= pts_[i].first) {
        Rat t = (x - pts_[i - 1].first) / (pts_[i].first - pts_[i - 1].first);
        return pts_[i - 1].second + t * (pts_[i].second - pts_[i - 1].second);
      }
    }
    return pts_.back().second;
  }

  friend bool operator==(const PolygonFunction& a, const PolygonFunction& b) {
    return a.pts_ == b.pts_;
  }

 private:
  std::vector<std::pair<Rat, Rat>> pts_;
};

// Polygon view of a type: slopes gamma_1 >= ... >= gamma_r on unit steps.
inline PolygonFunction polygon_of(const TypeVector& t) {
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), Rat(0)}};
  Rat x = 0, y = 0;
  for (size_t i = 0; i < t.length(); ++i) {
    x += 1;
    y += t[i];
    pts.emplace_back(x, y);
  }
  return PolygonFunction(std::move(pts));
}

// f <= g at the union of breakpoint abscissas; sufficient for concave
// piecewise-linear functions on the same domain.
inline bool polygon_le(const PolygonFunction& f, const PolygonFunction& g) {
  if (f.domain_end() != g.domain_end())
    fail(errc::domain_mismatch, "polygon_le on different domains");
  std::set<Rat> xs;
  for (const auto& [x, y] : f.breakpoints()) xs.insert(x);
  for (const auto& [x, y] : g.breakpoints()) xs.insert(x);
  for (const auto& x : xs)
    if (f(x) > g(x)) return false;
  return true;
}

// t_{F,n}(M)(x) = (1/n) * t_{F,t}(M/p^n M)(n x).
inline PolygonFunction polygon_rescale(long n, const PolygonFunction& f) {
  if (n < 1) fail(errc::domain_mismatch, "rescale requires n >= 1");
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& [x, y] : f.breakpoints()) pts.emplace_back(x / n, y / n);
  return PolygonFunction(std::move(pts));
}

// Ordinate scaling by a positive rational factor.
inline PolygonFunction polygon_scale_y(const Rat& c, const PolygonFunction& f) {
  if (!(c > 0)) fail(errc::domain_mismatch, "scale factor must be positive");
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& [x, y] : f.breakpoints()) pts.emplace_back(x, y * c);
  return PolygonFunction(std::move(pts));
}

// Pointwise minimum of two concave polygons on the same domain (again
// concave); evaluated on the union of breakpoints and crossing points.
inline PolygonFunction polygon_min(const PolygonFunction& f, const PolygonFunction& g) {
  if (f.domain_end() != g.domain_end())
    fail(errc::domain_mismatch, "polygon_min on different domains");
  std::set<Rat> xs;
  for (const auto& [x, y] : f.breakpoints()) xs.insert(x);
  for (const auto& [x, y] : g.breakpoints()) xs.insert(x);
  // Crossing points between consecutive abscissas.
  std::vector<Rat> base(xs.begin(), xs.end());
  for (size_t i = 0; i + 1 < base.size(); ++i) {
    Rat x0 = base[i], x1 = base[i + 1];
    Rat d0 = f(x0) - g(x0), d1 = f(x1) - g(x1);
    if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) xs.insert(x0 + (x1 - x0) * d0 / (d0 - d1));
  }
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& x : xs) pts.emplace_back(x, std::min(f(x), g(x)));
  return PolygonFunction(std::move(pts));
}

}  // namespace slopeforge
