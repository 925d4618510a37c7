// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_GEOMETRY_UTIL_HPP
#define CAVITY_GEOMETRY_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "cavity/common.hpp"

namespace cavity::detail
{

// Floating-point orientation; only used on user geometry, never inside the triangulator.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

inline bool on_segment(Vec2 p, Vec2 a, Vec2 b, double tol)
{
  const Vec2 d = b - a;
  const double L = norm(d);
  if (L == 0.0) {
    return norm(p - a) <= tol;
  }
  if (std::abs(cross(d, p - a)) > tol * L) {
    return false;
  }
  const double t = dot(p - a, d) / (L * L);
  return t >= -tol / L && t <= 1.0 + tol / L;
}

// True when closed segments ab and cd share at least one point.
inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d)
{
  const double scale = std::max({norm(b - a), norm(d - c), 1e-300});
  const double tol = 1e-12 * scale;
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  const double eps = tol * scale;
  if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
      ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))) {
    return true;
  }
  return on_segment(c, a, b, tol) || on_segment(d, a, b, tol) || on_segment(a, c, d, tol) ||
         on_segment(b, c, d, tol);
}

// Even-odd test. Points on the boundary count as inside when closed is set.
inline bool point_in_polygon(Vec2 p, const std::vector<Vec2> &poly, bool closed)
{
  const std::size_t n = poly.size();
  double scale = 0.0;
  for (Vec2 q : poly) {
    scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
  }
  const double tol = 1e-12 * std::max(scale, 1e-300);
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 b = poly[i];
    if (on_segment(p, a, b, tol)) {
      return closed;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) {
        inside = !inside;
      }
    }
  }
  return inside;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b)
{
  const Vec2 d = b - a;
  const double L2 = dot(d, d);
  double t = L2 > 0.0 ? dot(p - a, d) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

}  // namespace cavity::detail

#endif  // CAVITY_GEOMETRY_UTIL_HPP
