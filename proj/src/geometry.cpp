// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "geometry_util.hpp"

namespace cavity
{

namespace
{

std::uint64_t edge_key(int a, int b)
{
  if (a > b) {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

//
// CavityGeometry
//

CavityGeometry CavityGeometry::rectangular(double width, double depth, double R, double R_hat)
{
  CavityGeometry g;
  g.R = R;
  g.R_hat = R_hat;
  const double h = 0.5 * width;
  g.cavity_polygon = {{-h, 0.0}, {-h, -depth}, {h, -depth}, {h, 0.0}};
  return g;
}

void CavityGeometry::validate() const
{
  auto fail = [](const std::string &what) { throw GeometryError("cavity geometry: " + what); };

  if (!(R > 0.0) || !std::isfinite(R)) {
    fail("R must be positive and finite");
  }
  if (!(R_hat >= 0.0) || !(R_hat < R)) {
    fail("R_hat must satisfy 0 <= R_hat < R");
  }
  if (cavity_polygon.size() < 3) {
    fail("cavity polygon needs at least 3 vertices");
  }
  if (cavity_polygon.front().y != 0.0 || cavity_polygon.back().y != 0.0) {
    fail("cavity polygon must start and end on the ground line");
  }
  if (!(aperture_left() < aperture_right())) {
    fail("aperture must run left to right");
  }
  for (std::size_t i = 1; i + 1 < cavity_polygon.size(); ++i) {
    if (!(cavity_polygon[i].y < 0.0)) {
      fail("interior cavity vertices must lie strictly below the ground");
    }
  }
  if (aperture_left() < -R || aperture_right() > R) {
    fail("aperture must lie inside the TBC half-disc");
  }
  // Simplicity of the closed polygon (aperture edge included).
  const auto &P = cavity_polygon;
  const std::size_t n = P.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (detail::segments_intersect(P[i], P[(i + 1) % n], P[j], P[(j + 1) % n])) {
        fail("cavity polygon self-intersects");
      }
    }
  }

  auto check_inside = [&](Vec2 p, const std::string &what) {
    if (p.y > 0.0) {
      if (!(std::hypot(p.x, p.y) < R_hat)) {
        fail(what + " reaches above the ground outside the R_hat half-disc");
      }
    } else if (!detail::point_in_polygon(p, P, /*closed=*/true)) {
      fail(what + " is not contained in the cavity");
    }
  };
  for (std::size_t k = 0; k < humps.size(); ++k) {
    const Rect &h = humps[k];
    if (!(h.x0 < h.x1) || !(h.y0 < h.y1)) {
      fail("hump " + std::to_string(k) + " is degenerate");
    }
    for (Vec2 c : {Vec2{h.x0, h.y0}, Vec2{h.x1, h.y0}, Vec2{h.x0, h.y1}, Vec2{h.x1, h.y1}}) {
      check_inside(c, "hump " + std::to_string(k));
    }
    for (std::size_t j = 0; j < k; ++j) {
      const Rect &o = humps[j];
      if (h.x0 < o.x1 && o.x0 < h.x1 && h.y0 < o.y1 && o.y0 < h.y1) {
        fail("humps " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
      }
    }
  }
  for (std::size_t k = 0; k < coatings.size(); ++k) {
    const auto &poly = coatings[k].polygon;
    if (poly.size() < 3) {
      fail("coating " + std::to_string(k) + " needs at least 3 vertices");
    }
    if (coatings[k].region == kFreeSpaceRegion) {
      fail("coating " + std::to_string(k) + " uses the free-space region id");
    }
    for (Vec2 c : poly) {
      check_inside(c, "coating " + std::to_string(k));
    }
  }
}

int CavityGeometry::region_at(Vec2 p) const
{
  for (const Rect &h : humps) {
    if (p.x > h.x0 && p.x < h.x1 && p.y > h.y0 && p.y < h.y1) {
      return -1;
    }
  }
  const bool in_disc = p.y > 0.0 && p.x * p.x + p.y * p.y < R * R;
  const bool in_cavity = p.y <= 0.0 && detail::point_in_polygon(p, cavity_polygon, true);
  if (!in_disc && !in_cavity) {
    return -1;
  }
  for (const auto &c : coatings) {
    if (detail::point_in_polygon(p, c.polygon, true)) {
      return c.region;
    }
  }
  return in_cavity ? cavity_region : kFreeSpaceRegion;
}

//
// Edge tags
//

const char *to_string(EdgeTag tag)
{
  switch (tag) {
    case EdgeTag::Interior:
      return "interior";
    case EdgeTag::Wall:
      return "wall";
    case EdgeTag::Ground:
      return "ground";
    case EdgeTag::Arc:
      return "arc";
    case EdgeTag::Aperture:
      return "aperture";
  }
  return "interior";
}

EdgeTag edge_tag_from_string(const std::string &name)
{
  for (EdgeTag t : {EdgeTag::Interior, EdgeTag::Wall, EdgeTag::Ground, EdgeTag::Arc,
                    EdgeTag::Aperture}) {
    if (name == to_string(t)) {
      return t;
    }
  }
  throw GeometryError("unknown edge tag '" + name + "'");
}

//
// Mesh
//

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles,
           std::span<const TaggedEdge> tags, double arc_radius, int generation,
           std::vector<int> parent)
  : nodes_(std::move(nodes)), triangles_(std::move(triangles)), arc_radius_(arc_radius),
    generation_(generation), parent_(std::move(parent))
{
  if (parent_.empty()) {
    parent_.assign(triangles_.size(), -1);
  }
  const int nn = num_nodes();
  tri_edges_.resize(triangles_.size());
  edges_.reserve(triangles_.size() * 3 / 2 + 16);
  edge_index_.reserve(triangles_.size() * 2);
  for (int t = 0; t < num_triangles(); ++t) {
    const auto &v = triangles_[t].v;
    for (int k = 0; k < 3; ++k) {
      if (v[k] < 0 || v[k] >= nn) {
        throw GeometryError("mesh: triangle " + std::to_string(t) + " references a missing node");
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int a = v[(k + 1) % 3];
      const int b = v[(k + 2) % 3];
      const auto key = edge_key(a, b);
      auto [it, inserted] = edge_index_.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        MeshEdge e;
        e.v = {std::min(a, b), std::max(a, b)};
        e.tri = {t, -1};
        edges_.push_back(e);
      } else {
        MeshEdge &e = edges_[it->second];
        if (e.tri[1] != -1) {
          throw GeometryError("mesh: edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") shared by more than two triangles");
        }
        e.tri[1] = t;
      }
      tri_edges_[t][k] = it->second;
    }
  }
  for (const TaggedEdge &te : tags) {
    const int e = find_edge(te.a, te.b);
    if (e < 0) {
      throw GeometryError("mesh: tagged edge (" + std::to_string(te.a) + "," +
                          std::to_string(te.b) + ") is not a mesh edge");
    }
    edges_[e].tag = te.tag;
  }
}

int Mesh::find_edge(int a, int b) const
{
  const auto it = edge_index_.find(edge_key(a, b));
  return it == edge_index_.end() ? -1 : it->second;
}

double Mesh::area(int t) const
{
  const auto &v = triangles_[t].v;
  return 0.5 * cross(nodes_[v[1]] - nodes_[v[0]], nodes_[v[2]] - nodes_[v[0]]);
}

double Mesh::diameter(int t) const
{
  const auto &v = triangles_[t].v;
  return std::max({norm(nodes_[v[1]] - nodes_[v[0]]), norm(nodes_[v[2]] - nodes_[v[1]]),
                   norm(nodes_[v[0]] - nodes_[v[2]])});
}

double Mesh::min_angle() const
{
  double best = kPi;
  for (const auto &tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = nodes_[tri.v[k]];
      const Vec2 a = nodes_[tri.v[(k + 1) % 3]] - p;
      const Vec2 b = nodes_[tri.v[(k + 2) % 3]] - p;
      best = std::min(best, std::atan2(std::abs(cross(a, b)), dot(a, b)));
    }
  }
  return best;
}

std::vector<TaggedEdge> Mesh::tagged_edges() const
{
  std::vector<TaggedEdge> out;
  for (const auto &e : edges_) {
    if (e.tag != EdgeTag::Interior) {
      out.push_back({e.v[0], e.v[1], e.tag});
    }
  }
  return out;
}

std::vector<bool> Mesh::pec_nodes() const
{
  std::vector<bool> pec(nodes_.size(), false);
  for (const auto &e : edges_) {
    if (e.tag == EdgeTag::Wall || e.tag == EdgeTag::Ground) {
      pec[e.v[0]] = pec[e.v[1]] = true;
    }
  }
  return pec;
}

std::string Mesh::audit() const
{
  std::ostringstream msg;
  for (int t = 0; t < num_triangles(); ++t) {
    if (!(area(t) > 0.0)) {
      msg << "triangle " << t << " has non-positive area " << area(t);
      return msg.str();
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto &e = edges_[i];
    const bool boundary = e.tri[1] < 0;
    if (boundary && (e.tag == EdgeTag::Interior || e.tag == EdgeTag::Aperture)) {
      msg << "boundary edge (" << e.v[0] << "," << e.v[1] << ") carries tag " << to_string(e.tag)
          << " (hanging node or missing tag)";
      return msg.str();
    }
    if (!boundary && e.tag != EdgeTag::Interior && e.tag != EdgeTag::Aperture) {
      msg << "interior edge (" << e.v[0] << "," << e.v[1] << ") carries boundary tag "
          << to_string(e.tag);
      return msg.str();
    }
    if (e.tag == EdgeTag::Arc) {
      for (int v : e.v) {
        const double r = norm(nodes_[v]);
        if (std::abs(r - arc_radius_) > 1e-12 * arc_radius_) {
          msg << "arc node " << v << " at radius " << r << " off the circle " << arc_radius_;
          return msg.str();
        }
      }
    }
  }
  return {};
}

//
// BoundaryArc
//

double BoundaryArc::polygon_length() const
{
  return std::accumulate(chord.begin(), chord.end(), 0.0);
}

BoundaryArc boundary_arc(const Mesh &mesh)
{
  std::vector<int> ids;
  for (const auto &e : mesh.edges()) {
    if (e.tag == EdgeTag::Arc) {
      ids.push_back(e.v[0]);
      ids.push_back(e.v[1]);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2) {
    throw PreconditionError("boundary_arc: mesh has fewer than two nodes on the arc");
  }
  const auto &X = mesh.nodes();
  auto angle = [&](int v) { return std::atan2(std::max(X[v].y, 0.0), X[v].x); };
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return angle(a) < angle(b); });

  BoundaryArc arc;
  arc.R = mesh.arc_radius();
  arc.nodes = ids;
  arc.phi.reserve(ids.size());
  for (int v : ids) {
    arc.phi.push_back(angle(v));
  }
  for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
    if (!(arc.phi[k] < arc.phi[k + 1])) {
      throw GeometryError("boundary_arc: repeated polar angle on the arc");
    }
    const int e = mesh.find_edge(ids[k], ids[k + 1]);
    if (e < 0 || mesh.edges()[e].tag != EdgeTag::Arc) {
      throw GeometryError("boundary_arc: arc nodes do not form a single chain");
    }
    arc.chord.push_back(norm(X[ids[k + 1]] - X[ids[k]]));
  }
  return arc;
}

}  // namespace cavity
