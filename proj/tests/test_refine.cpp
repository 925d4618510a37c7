// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "cavity/geometry.hpp"

using namespace cavity;

namespace
{

constexpr double kLambda = 1.0 / 16.0;

Mesh example1_mesh(double h0 = kLambda / 8)
{
  return initial_mesh(CavityGeometry::rectangular(kLambda, kLambda / 4, kLambda / 2), h0);
}

std::vector<int> all_triangles(const Mesh &m)
{
  std::vector<int> ids(m.num_triangles());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

// No node may sit strictly inside an edge of another triangle.
bool no_hanging_nodes(const Mesh &m)
{
  const auto &X = m.nodes();
  for (const auto &e : m.edges()) {
    const Vec2 a = X[e.v[0]];
    const Vec2 d = X[e.v[1]] - a;
    const double L = norm(d);
    for (int n = 0; n < m.num_nodes(); ++n) {
      if (n == e.v[0] || n == e.v[1]) {
        continue;
      }
      const Vec2 p = X[n] - a;
      const double t = dot(p, d) / (L * L);
      if (t > 1e-9 && t < 1 - 1e-9 && std::abs(cross(d, p)) < 1e-12 * L * L) {
        return false;
      }
    }
  }
  return true;
}

int triangle_containing(const Mesh &m, Vec2 p)
{
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto &v = m.triangles()[t].v;
    const Vec2 a = m.nodes()[v[0]];
    const Vec2 b = m.nodes()[v[1]];
    const Vec2 c = m.nodes()[v[2]];
    if (cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0) {
      return t;
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("refine rejects empty or invalid marks")
{
  const Mesh m = example1_mesh();
  CHECK_THROWS_AS(refine(m, std::vector<int>{}), PreconditionError);
  CHECK_THROWS_AS(refine(m, std::vector<int>{m.num_triangles()}), PreconditionError);
  CHECK_THROWS_AS(refine(m, std::vector<int>{-1}), PreconditionError);
}

TEST_CASE("uniform refinement roughly doubles the triangle count")
{
  const Mesh m = example1_mesh();
  const Mesh r = refine(m, all_triangles(m));
  CHECK(r.audit().empty());
  CHECK(no_hanging_nodes(r));
  CHECK(r.num_triangles() >= 2 * m.num_triangles());
  CHECK(r.num_triangles() <= 4 * m.num_triangles());
  CHECK(r.generation() == m.generation() + 1);
  REQUIRE(r.parent().size() == static_cast<std::size_t>(r.num_triangles()));
}

TEST_CASE("children tile their parent and old nodes keep their ids")
{
  const Mesh m = example1_mesh();
  const Mesh r = refine(m, all_triangles(m));
  for (int i = 0; i < m.num_nodes(); ++i) {
    CHECK(r.nodes()[i] == m.nodes()[i]);
  }
  std::vector<double> child_area(m.num_triangles(), 0.0);
  for (int t = 0; t < r.num_triangles(); ++t) {
    const int p = r.parent()[t];
    REQUIRE(p >= 0);
    REQUIRE(p < m.num_triangles());
    child_area[p] += r.area(t);
    CHECK(r.triangles()[t].region == m.triangles()[p].region);
  }
  for (int p = 0; p < m.num_triangles(); ++p) {
    bool on_arc = false;
    for (int e : m.triangle_edges(p)) {
      on_arc = on_arc || m.edges()[e].tag == EdgeTag::Arc;
    }
    if (on_arc) {
      // Projecting the arc midpoint outwards only adds area.
      CHECK(child_area[p] >= m.area(p) * (1 - 1e-14));
    } else {
      CHECK(std::abs(child_area[p] - m.area(p)) <= 1e-14 * m.area(p));
    }
  }
}

TEST_CASE("repeated local refinement stays conforming and shape regular")
{
  Mesh m = example1_mesh();
  const double angle0 = m.min_angle();
  const Vec2 corner{kLambda / 2 - 1e-9, -1e-9};  // right cavity corner, on the arc
  const Vec2 bottom{-kLambda / 2 + 1e-9, -kLambda / 4 + 1e-9};
  for (int gen = 0; gen < 12; ++gen) {
    const int a = triangle_containing(m, corner);
    const int b = triangle_containing(m, bottom);
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    const int before = m.num_triangles();
    m = refine(m, std::vector<int>{a, b});
    CHECK(m.num_triangles() > before);
    CHECK(m.audit().empty());
    CHECK(m.min_angle() >= 0.5 * angle0);
  }
  CHECK(no_hanging_nodes(m));
}

TEST_CASE("arc midpoints are projected onto the circle")
{
  Mesh m = example1_mesh();
  for (int gen = 0; gen < 3; ++gen) {
    m = refine(m, all_triangles(m));
  }
  const double R = m.arc_radius();
  for (const auto &e : m.edges()) {
    if (e.tag == EdgeTag::Arc) {
      CHECK(std::abs(norm(m.nodes()[e.v[0]]) - R) <= 1e-14 * R);
      CHECK(std::abs(norm(m.nodes()[e.v[1]]) - R) <= 1e-14 * R);
    }
  }
}

TEST_CASE("bisecting one arc edge adds exactly one arc node")
{
  Mesh m = example1_mesh();
  int target = -1;
  for (int pass = 0; pass < 4 && target < 0; ++pass) {
    for (int t = 0; t < m.num_triangles() && target < 0; ++t) {
      const auto &v = m.triangles()[t].v;
      const int e = m.find_edge(v[0], v[1]);
      if (e >= 0 && m.edges()[e].tag == EdgeTag::Arc) {
        target = t;
      }
    }
    if (target < 0) {
      m = refine(m, all_triangles(m));
    }
  }
  REQUIRE(target >= 0);
  const int M = boundary_arc(m).size();
  const Mesh r = refine(m, std::vector<int>{target});
  CHECK(boundary_arc(r).size() == M + 1);
}

TEST_CASE("boundary tags are inherited by the halves of a split edge")
{
  const Mesh m = example1_mesh();
  const Mesh r = refine(m, all_triangles(m));
  std::map<EdgeTag, double> before;
  std::map<EdgeTag, double> after;
  for (const auto &e : m.edges()) {
    if (e.tag != EdgeTag::Arc) {
      before[e.tag] += norm(m.nodes()[e.v[1]] - m.nodes()[e.v[0]]);
    }
  }
  for (const auto &e : r.edges()) {
    if (e.tag != EdgeTag::Arc) {
      after[e.tag] += norm(r.nodes()[e.v[1]] - r.nodes()[e.v[0]]);
    }
  }
  for (EdgeTag t : {EdgeTag::Wall, EdgeTag::Ground, EdgeTag::Aperture}) {
    CHECK(std::abs(after[t] - before[t]) <= 1e-14 * std::max(1.0, before[t]));
  }
  CHECK(std::abs(after[EdgeTag::Aperture] - kLambda) <= 1e-15);
}
