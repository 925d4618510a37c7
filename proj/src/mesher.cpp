// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

// Initial mesh generation: planar straight-line graph from the geometry, boundary sampling,
// a triangular lattice in the interior, encroachment splitting so that every constraint
// subsegment is a Gabriel edge, and an exact-arithmetic Bowyer-Watson triangulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "cavity/geometry.hpp"
#include "geometry_util.hpp"

namespace cavity
{

namespace
{

using i64 = std::int64_t;
using i128 = __int128;

struct IPoint
{
  i64 x = 0;
  i64 y = 0;
};

i128 orient_exact(IPoint a, IPoint b, IPoint c)
{
  return static_cast<i128>(b.x - a.x) * (c.y - a.y) - static_cast<i128>(b.y - a.y) * (c.x - a.x);
}

// Positive when d lies strictly inside the circle through the counter-clockwise a, b, c.
i128 incircle_exact(IPoint a, IPoint b, IPoint c, IPoint d)
{
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 alift = adx * adx + ady * ady;
  const i128 blift = bdx * bdx + bdy * bdy;
  const i128 clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
         clift * (adx * bdy - bdx * ady);
}

// Incremental Delaunay triangulation on integer coordinates. Coordinates of the input
// points must lie in [-2^24, 2^24]; three enclosing vertices are appended internally.
class Triangulator
{
public:
  explicit Triangulator(std::vector<IPoint> pts) : pts_(std::move(pts)), n_(pts_.size())
  {
    constexpr i64 s = i64{1} << 25;
    pts_.push_back({-2 * s, -s});
    pts_.push_back({2 * s, -s});
    pts_.push_back({0, 2 * s});
    const int a = static_cast<int>(n_);
    tris_.push_back({{a, a + 1, a + 2}, {-1, -1, -1}, true});
  }

  void insert(int p)
  {
    const int t0 = locate(p);
    for (int v : tris_[t0].v) {
      if (pts_[v].x == pts_[p].x && pts_[v].y == pts_[p].y) {
        throw GeometryError("mesher: two points coincide after snapping");
      }
    }

    // Cavity of triangles whose circumcircle strictly contains p.
    cavity_.clear();
    cavity_.push_back(t0);
    tris_[t0].alive = false;
    for (std::size_t q = 0; q < cavity_.size(); ++q) {
      for (int nb : tris_[cavity_[q]].nb) {
        if (nb >= 0 && tris_[nb].alive && in_circle(nb, p)) {
          tris_[nb].alive = false;
          cavity_.push_back(nb);
        }
      }
    }

    rim_.clear();
    for (int t : cavity_) {
      const Tri &tr = tris_[t];
      for (int k = 0; k < 3; ++k) {
        const int nb = tr.nb[k];
        if (nb < 0 || tris_[nb].alive) {
          rim_.push_back({tr.v[(k + 1) % 3], tr.v[(k + 2) % 3], nb});
        }
      }
    }

    // Fan the cavity from p, recycling the dead slots first.
    std::vector<int> fresh(rim_.size());
    for (std::size_t i = 0; i < rim_.size(); ++i) {
      int slot;
      if (i < cavity_.size()) {
        slot = cavity_[i];
      } else {
        slot = static_cast<int>(tris_.size());
        tris_.push_back({});
      }
      fresh[i] = slot;
      Tri &tr = tris_[slot];
      tr.v = {rim_[i].a, rim_[i].b, p};
      tr.nb = {-1, -1, rim_[i].outside};
      tr.alive = true;
      if (orient_exact(pts_[rim_[i].a], pts_[rim_[i].b], pts_[p]) <= 0) {
        throw GeometryError("mesher: degenerate star while inserting a point");
      }
      if (rim_[i].outside >= 0) {
        Tri &o = tris_[rim_[i].outside];
        for (int k = 0; k < 3; ++k) {
          if (o.v[(k + 1) % 3] == rim_[i].b && o.v[(k + 2) % 3] == rim_[i].a) {
            o.nb[k] = slot;
          }
        }
      }
    }
    for (std::size_t i = 0; i < rim_.size(); ++i) {
      Tri &tr = tris_[fresh[i]];
      for (std::size_t j = 0; j < rim_.size(); ++j) {
        if (rim_[j].a == rim_[i].b) {
          tr.nb[0] = fresh[j];  // across b-p
        }
        if (rim_[j].b == rim_[i].a) {
          tr.nb[1] = fresh[j];  // across p-a
        }
      }
    }
    last_ = fresh.front();
  }

  // Final triangles not touching the enclosing vertices, counter-clockwise.
  std::vector<std::array<int, 3>> triangles() const
  {
    std::vector<std::array<int, 3>> out;
    const int n = static_cast<int>(n_);
    for (const Tri &t : tris_) {
      if (t.alive && t.v[0] < n && t.v[1] < n && t.v[2] < n) {
        out.push_back(t.v);
      }
    }
    return out;
  }

private:
  struct Tri
  {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};  // nb[k] lies across the edge opposite v[k]
    bool alive = false;
  };

  bool in_circle(int t, int p) const
  {
    const auto &v = tris_[t].v;
    return incircle_exact(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[p]) > 0;
  }

  int locate(int p)
  {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) {
        ++t;
      }
    }
    // Visibility walk; terminates on Delaunay triangulations. A generous cap guards
    // against surprises, after which a linear scan takes over.
    const std::size_t cap = 4 * tris_.size() + 64;
    for (std::size_t step = 0; step < cap; ++step) {
      const Tri &tr = tris_[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        if (orient_exact(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], pts_[p]) < 0) {
          next = tr.nb[k];
          break;
        }
      }
      if (next < 0) {
        return t;
      }
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const Tri &tr = tris_[i];
      if (!tr.alive) {
        continue;
      }
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        inside = orient_exact(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], pts_[p]) >= 0;
      }
      if (inside) {
        return static_cast<int>(i);
      }
    }
    throw GeometryError("mesher: point location failed");
  }

  struct RimEdge
  {
    int a, b, outside;
  };

  std::vector<IPoint> pts_;
  std::size_t n_;
  std::vector<Tri> tris_;
  std::vector<int> cavity_;
  std::vector<RimEdge> rim_;
  int last_ = -1;
};

// Straight constraint segment between two junction vertices (or an arc chord).
struct Subsegment
{
  int a = 0;
  int b = 0;
  bool arc = false;
};

class Builder
{
public:
  Builder(const CavityGeometry &geom, double h0) : g_(geom), h0_(h0)
  {
    scale_ = g_.R;
    for (Vec2 p : g_.cavity_polygon) {
      scale_ = std::max({scale_, std::abs(p.x), std::abs(p.y)});
    }
    tol_ = 1e-10 * scale_;
  }

  Mesh build()
  {
    collect_pieces();
    sample_pieces();
    add_lattice();
    resolve_encroachment();
    return triangulate();
  }

private:
  int add_vertex(Vec2 p)
  {
    for (std::size_t i = 0; i < junctions_; ++i) {
      if (norm(pts_[i] - p) <= tol_) {
        return static_cast<int>(i);
      }
    }
    pts_.push_back(p);
    ++junctions_;
    return static_cast<int>(pts_.size() - 1);
  }

  bool has_domain_on_a_side(Vec2 a, Vec2 b) const
  {
    const Vec2 m = 0.5 * (a + b);
    const Vec2 d = b - a;
    const double L = norm(d);
    const double eps = 1e-7 * scale_;
    const Vec2 n{-d.y / L, d.x / L};
    return g_.region_at(m + eps * n) >= 0 || g_.region_at(m - eps * n) >= 0;
  }

  void collect_pieces()
  {
    std::vector<std::pair<Vec2, Vec2>> raw;
    const double xl = g_.aperture_left();
    const double xr = g_.aperture_right();
    if (xl + g_.R > tol_) {
      raw.push_back({{-g_.R, 0.0}, {xl, 0.0}});
    }
    if (g_.R - xr > tol_) {
      raw.push_back({{xr, 0.0}, {g_.R, 0.0}});
    }
    const auto &P = g_.cavity_polygon;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
      raw.push_back({P[i], P[i + 1]});
    }
    raw.push_back({{xl, 0.0}, {xr, 0.0}});
    for (const Rect &h : g_.humps) {
      const Vec2 c[4] = {{h.x0, h.y0}, {h.x1, h.y0}, {h.x1, h.y1}, {h.x0, h.y1}};
      for (int k = 0; k < 4; ++k) {
        raw.push_back({c[k], c[(k + 1) % 4]});
      }
    }
    for (const auto &coat : g_.coatings) {
      const auto &Q = coat.polygon;
      for (std::size_t k = 0; k < Q.size(); ++k) {
        raw.push_back({Q[k], Q[(k + 1) % Q.size()]});
      }
    }

    // Arc endpoints first so they keep the lowest ids.
    add_vertex({g_.R, 0.0});
    add_vertex({-g_.R, 0.0});

    std::unordered_set<std::uint64_t> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto [a, b] = raw[i];
      const Vec2 d = b - a;
      const double L2 = dot(d, d);
      std::vector<double> ts = {0.0, 1.0};
      for (std::size_t j = 0; j < raw.size(); ++j) {
        if (j == i) {
          continue;
        }
        const auto [c, e] = raw[j];
        for (Vec2 q : {c, e}) {
          if (detail::on_segment(q, a, b, tol_)) {
            ts.push_back(dot(q - a, d) / L2);
          }
        }
        const double den = cross(d, e - c);
        if (std::abs(den) > 1e-14 * std::sqrt(L2) * norm(e - c)) {
          const double t = cross(c - a, e - c) / den;
          const double s = cross(c - a, d) / den;
          if (t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0) {
            ts.push_back(t);
          }
        }
      }
      std::sort(ts.begin(), ts.end());
      std::vector<int> ids;
      for (double t : ts) {
        const int v = add_vertex(a + std::clamp(t, 0.0, 1.0) * d);
        if (ids.empty() || ids.back() != v) {
          ids.push_back(v);
        }
      }
      for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
        const int u = std::min(ids[k], ids[k + 1]);
        const int w = std::max(ids[k], ids[k + 1]);
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<unsigned>(w);
        if (!seen.insert(key).second) {
          continue;
        }
        if (has_domain_on_a_side(pts_[u], pts_[w])) {
          pieces_.push_back({u, w, false});
        }
      }
    }
  }

  int segments_for(double length) const
  {
    if (!std::isfinite(h0_)) {
      return 1;
    }
    return std::max(1, static_cast<int>(std::ceil(length / h0_ - 1e-9)));
  }

  Vec2 arc_point(double phi) const { return {g_.R * std::cos(phi), g_.R * std::sin(phi)}; }

  void sample_pieces()
  {
    for (const Subsegment &pc : pieces_) {
      const Vec2 a = pts_[pc.a];
      const Vec2 b = pts_[pc.b];
      const int m = segments_for(norm(b - a));
      int prev = pc.a;
      for (int k = 1; k <= m; ++k) {
        int cur = pc.b;
        if (k < m) {
          pts_.push_back(a + (static_cast<double>(k) / m) * (b - a));
          cur = static_cast<int>(pts_.size() - 1);
        }
        subs_.push_back({prev, cur, false});
        prev = cur;
      }
    }
    const int m = std::max(8, segments_for(kPi * g_.R));
    int prev = 0;  // (R, 0)
    for (int k = 1; k <= m; ++k) {
      int cur = 1;  // (-R, 0)
      if (k < m) {
        pts_.push_back(arc_point(kPi * k / m));
        cur = static_cast<int>(pts_.size() - 1);
      }
      subs_.push_back({prev, cur, true});
      prev = cur;
    }
    constrained_ = pts_.size();
  }

  void add_lattice()
  {
    if (!std::isfinite(h0_)) {
      return;
    }
    double ymin = 0.0;
    for (Vec2 p : g_.cavity_polygon) {
      ymin = std::min(ymin, p.y);
    }
    const double dy = 0.5 * std::sqrt(3.0) * h0_;
    const double clearance = 0.5 * h0_;
    int row = 0;
    for (double y = ymin + 0.5 * dy; y < g_.R; y += dy, ++row) {
      const double shift = (row % 2) * 0.5 * h0_;
      for (double x = -g_.R + shift + 0.5 * h0_; x < g_.R; x += h0_) {
        const Vec2 p{x, y};
        if (g_.region_at(p) < 0) {
          continue;
        }
        bool clear = true;
        for (const Subsegment &s : subs_) {
          if (detail::point_segment_distance(p, pts_[s.a], pts_[s.b]) < clearance) {
            clear = false;
            break;
          }
        }
        if (clear) {
          pts_.push_back(p);
        }
      }
    }
    alive_.assign(pts_.size(), true);
  }

  static bool encroaches(Vec2 p, Vec2 a, Vec2 b)
  {
    const Vec2 m = 0.5 * (a + b);
    const double r2 = 0.25 * dot(b - a, b - a);
    return dot(p - m, p - m) <= r2 * (1.0 + 1e-9);
  }

  void resolve_encroachment()
  {
    alive_.resize(pts_.size(), true);
    const std::size_t cap = 200000;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < subs_.size(); ++i) {
        const Vec2 a = pts_[subs_[i].a];
        const Vec2 b = pts_[subs_[i].b];
        bool split = false;
        for (std::size_t v = 0; v < pts_.size(); ++v) {
          if (!alive_[v] || static_cast<int>(v) == subs_[i].a ||
              static_cast<int>(v) == subs_[i].b) {
            continue;
          }
          if (!encroaches(pts_[v], a, b)) {
            continue;
          }
          if (is_constraint(v)) {
            split = true;
            break;
          }
          alive_[v] = false;
          changed = true;
        }
        if (!split) {
          continue;
        }
        Vec2 m = 0.5 * (a + b);
        if (subs_[i].arc) {
          const double phi = std::atan2(m.y, m.x);
          m = arc_point(phi);
        }
        pts_.push_back(m);
        alive_.push_back(true);
        constraint_extra_.insert(pts_.size() - 1);
        const int mid = static_cast<int>(pts_.size() - 1);
        const Subsegment old = subs_[i];
        subs_[i] = {old.a, mid, old.arc};
        subs_.push_back({mid, old.b, old.arc});
        changed = true;
        if (subs_.size() > cap) {
          throw GeometryError("mesher: encroachment splitting does not terminate");
        }
      }
    }
  }

  bool is_constraint(std::size_t v) const
  {
    return v < constrained_ || constraint_extra_.count(v) != 0;
  }

  Mesh triangulate()
  {
    // Snap every live point onto an integer grid; exact predicates on the grid decide the
    // combinatorics, the original coordinates go into the mesh.
    double extent = 0.0;
    for (Vec2 p : pts_) {
      extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    }
    const double s = static_cast<double>(i64{1} << 24) / extent;
    std::vector<int> live;
    std::vector<int> new_id(pts_.size(), -1);
    std::vector<IPoint> ipts;
    for (std::size_t v = 0; v < pts_.size(); ++v) {
      if (!alive_[v]) {
        continue;
      }
      new_id[v] = static_cast<int>(live.size());
      live.push_back(static_cast<int>(v));
      ipts.push_back({std::llround(pts_[v].x * s), std::llround(pts_[v].y * s)});
    }
    Triangulator dt(ipts);
    for (int i = 0; i < static_cast<int>(live.size()); ++i) {
      dt.insert(i);
    }
    const auto tris = dt.triangles();

    std::unordered_set<std::uint64_t> edge_set;
    auto key = [](int a, int b) {
      if (a > b) {
        std::swap(a, b);
      }
      return (static_cast<std::uint64_t>(a) << 32) | static_cast<unsigned>(b);
    };
    for (const auto &t : tris) {
      for (int k = 0; k < 3; ++k) {
        edge_set.insert(key(t[k], t[(k + 1) % 3]));
      }
    }
    for (const Subsegment &sub : subs_) {
      if (!edge_set.count(key(new_id[sub.a], new_id[sub.b]))) {
        throw GeometryError("mesher: constraint subsegment missing from the triangulation");
      }
    }

    // Keep triangles inside the domain and compact the node numbering.
    std::vector<int> node_id(live.size(), -1);
    std::vector<Vec2> nodes;
    std::vector<Triangle> triangles;
    for (const auto &t : tris) {
      const Vec2 c = (1.0 / 3.0) * (pts_[live[t[0]]] + pts_[live[t[1]]] + pts_[live[t[2]]]);
      const int region = g_.region_at(c);
      if (region < 0) {
        continue;
      }
      Triangle tri;
      for (int k = 0; k < 3; ++k) {
        int &id = node_id[t[k]];
        if (id < 0) {
          id = static_cast<int>(nodes.size());
          nodes.push_back(pts_[live[t[k]]]);
        }
        tri.v[k] = id;
      }
      tri.region = region;
      triangles.push_back(tri);
    }
    for (Triangle &t : triangles) {
      orient_refinement_edge(nodes, t);
    }

    // Boundary edges are classified geometrically; aperture edges are interior edges on
    // the cavity opening.
    std::unordered_map<std::uint64_t, int> count;
    for (const Triangle &t : triangles) {
      for (int k = 0; k < 3; ++k) {
        ++count[key(t.v[k], t.v[(k + 1) % 3])];
      }
    }
    const double xl = g_.aperture_left();
    const double xr = g_.aperture_right();
    const double ytol = 1e-12 * scale_;
    std::vector<TaggedEdge> tags;
    for (const auto &[k, c] : count) {
      const int a = static_cast<int>(k >> 32);
      const int b = static_cast<int>(k & 0xffffffffu);
      const Vec2 pa = nodes[a];
      const Vec2 pb = nodes[b];
      const Vec2 m = 0.5 * (pa + pb);
      const bool on_ground_line = std::abs(pa.y) <= ytol && std::abs(pb.y) <= ytol;
      const bool in_aperture = m.x > xl && m.x < xr;
      if (c == 2) {
        if (on_ground_line && in_aperture) {
          tags.push_back({a, b, EdgeTag::Aperture});
        }
        continue;
      }
      auto on_circle = [&](Vec2 p) {
        return std::abs(norm(p) - g_.R) <= 1e-12 * g_.R && p.y >= -ytol;
      };
      EdgeTag tag = EdgeTag::Wall;
      if (on_circle(pa) && on_circle(pb) && m.y > ytol) {
        tag = EdgeTag::Arc;
      } else if (on_ground_line && !in_aperture) {
        tag = EdgeTag::Ground;
      }
      tags.push_back({a, b, tag});
    }
    std::sort(tags.begin(), tags.end(), [](const TaggedEdge &x, const TaggedEdge &y) {
      return std::pair(std::min(x.a, x.b), std::max(x.a, x.b)) <
             std::pair(std::min(y.a, y.b), std::max(y.a, y.b));
    });
    return Mesh(std::move(nodes), std::move(triangles), tags, g_.R);
  }

  // Counter-clockwise order with the longest edge (ties broken by node ids) as v0-v1.
  static void orient_refinement_edge(const std::vector<Vec2> &X, Triangle &t)
  {
    if (cross(X[t.v[1]] - X[t.v[0]], X[t.v[2]] - X[t.v[0]]) < 0.0) {
      std::swap(t.v[1], t.v[2]);
    }
    auto rank = [&](int k) {
      const int a = t.v[k];
      const int b = t.v[(k + 1) % 3];
      const Vec2 d = X[b] - X[a];
      return std::tuple(dot(d, d), std::min(a, b), std::max(a, b));
    };
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (rank(k) > rank(best)) {
        best = k;
      }
    }
    std::rotate(t.v.begin(), t.v.begin() + best, t.v.end());
  }

  const CavityGeometry &g_;
  double h0_;
  double scale_ = 1.0;
  double tol_ = 0.0;
  std::vector<Vec2> pts_;
  std::size_t junctions_ = 0;
  std::vector<Subsegment> pieces_;
  std::vector<Subsegment> subs_;
  std::size_t constrained_ = 0;
  std::unordered_set<std::size_t> constraint_extra_;
  std::vector<bool> alive_;
};

}  // namespace

Mesh initial_mesh(const CavityGeometry &geom, double h0)
{
  geom.validate();
  if (!(h0 > 0.0)) {
    throw PreconditionError("initial_mesh: h0 must be positive");
  }
  return Builder(geom, h0).build();
}

}  // namespace cavity
