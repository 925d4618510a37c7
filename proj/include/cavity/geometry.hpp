// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_GEOMETRY_HPP
#define CAVITY_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cavity/common.hpp"

namespace cavity
{

// Axis-aligned PEC obstacle; removed from the computational domain.
struct Rect
{
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
};

// Material sub-region given as a simple polygon.
struct MaterialRegion
{
  std::vector<Vec2> polygon;
  int region = 0;
};

// Region id reserved for the homogeneous exterior medium.
inline constexpr int kFreeSpaceRegion = 0;

//
// Open cavity below the ground line x2 = 0, the TBC semicircle of radius R and optional
// PEC humps / material sub-regions.
//
// cavity_polygon runs from the left aperture end (x_left, 0) down the cavity wall and back
// up to the right aperture end (x_right, 0); the aperture segment closes it. Every vertex
// other than the two ends lies strictly below the ground.
//
struct CavityGeometry
{
  double R = 0.0;
  // Radius of the half-disc enclosing every inhomogeneity above the ground. Zero when the
  // upper half-plane is homogeneous.
  double R_hat = 0.0;
  std::vector<Vec2> cavity_polygon;
  std::vector<Rect> humps;
  std::vector<MaterialRegion> coatings;
  // Region id of cavity points not covered by a coating.
  int cavity_region = kFreeSpaceRegion;

  double aperture_left() const { return cavity_polygon.front().x; }
  double aperture_right() const { return cavity_polygon.back().x; }

  // Throws GeometryError describing the first violated invariant.
  void validate() const;

  // Region id at p, or -1 when p lies outside the domain (or inside a hump).
  int region_at(Vec2 p) const;

  static CavityGeometry rectangular(double width, double depth, double R, double R_hat = 0.0);
};

enum class EdgeTag : std::uint8_t
{
  Interior,
  Wall,      // cavity wall S and hump surfaces
  Ground,    // ground plane inside the half-disc
  Arc,       // artificial boundary on |x| = R
  Aperture,  // interior edge on the cavity opening
};

const char *to_string(EdgeTag tag);
EdgeTag edge_tag_from_string(const std::string &name);

// Vertices are counter-clockwise; v[0]-v[1] is the refinement edge (opposite the newest
// vertex v[2]).
struct Triangle
{
  std::array<int, 3> v{};
  int region = kFreeSpaceRegion;
};

struct TaggedEdge
{
  int a = 0;
  int b = 0;
  EdgeTag tag = EdgeTag::Interior;
};

struct MeshEdge
{
  std::array<int, 2> v{};        // sorted node ids
  std::array<int, 2> tri{-1, -1};  // tri[1] == -1 on the boundary
  EdgeTag tag = EdgeTag::Interior;
};

//
// Conforming triangulation with tagged boundary parts. Immutable once constructed; the
// edge table is derived in the constructor.
//
class Mesh
{
public:
  Mesh() = default;
  Mesh(std::vector<Vec2> nodes, std::vector<Triangle> triangles, std::span<const TaggedEdge> tags,
       double arc_radius, int generation = 0, std::vector<int> parent = {});

  const std::vector<Vec2> &nodes() const { return nodes_; }
  const std::vector<Triangle> &triangles() const { return triangles_; }
  const std::vector<MeshEdge> &edges() const { return edges_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  // Edge ids of triangle t; entry k is the edge opposite local vertex k.
  const std::array<int, 3> &triangle_edges(int t) const { return tri_edges_[t]; }
  int find_edge(int a, int b) const;

  double arc_radius() const { return arc_radius_; }
  int generation() const { return generation_; }
  // Parent triangle in the previous generation (-1 for an initial mesh).
  const std::vector<int> &parent() const { return parent_; }

  double area(int t) const;
  double diameter(int t) const;
  double min_angle() const;  // radians

  std::vector<TaggedEdge> tagged_edges() const;
  // Nodes on S or on the ground (homogeneous Dirichlet nodes for TM).
  std::vector<bool> pec_nodes() const;

  // Empty when the mesh is conforming, positively oriented and consistently tagged;
  // otherwise a description of the first defect.
  std::string audit() const;

private:
  std::vector<Vec2> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  double arc_radius_ = 0.0;
  int generation_ = 0;
  std::vector<int> parent_;
};

// Initial conforming triangulation of the half-disc plus cavity with every geometry
// vertex, interface and PEC surface present as mesh edges. h0 bounds the element size away
// from constraints; h0 = +inf yields the coarsest constrained triangulation.
Mesh initial_mesh(const CavityGeometry &geom, double h0);

// Newest-vertex bisection with conforming closure. Every marked triangle is bisected at
// least once; midpoints of arc edges are projected back onto |x| = R.
Mesh refine(const Mesh &mesh, std::span<const int> marked);

// Nodes of the artificial boundary ordered by polar angle.
struct BoundaryArc
{
  double R = 0.0;
  std::vector<int> nodes;
  std::vector<double> phi;
  // chord[k] = |x_{k+1} - x_k| for k = 0..M-2.
  std::vector<double> chord;

  int size() const { return static_cast<int>(nodes.size()); }
  // Lengths of the segments left/right of node i; zero past either end.
  double left(int i) const { return i > 0 ? chord[i - 1] : 0.0; }
  double right(int i) const { return i + 1 < size() ? chord[i] : 0.0; }
  double polygon_length() const;
};

BoundaryArc boundary_arc(const Mesh &mesh);

// Plain-text exchange format:
//   nodes N triangles T
//   N lines "x y", T lines "i j k region", then one "i j tag" line per tagged edge.
void write_mesh(std::ostream &out, const Mesh &mesh);
Mesh read_mesh(std::istream &in);

}  // namespace cavity

#endif  // CAVITY_GEOMETRY_HPP
