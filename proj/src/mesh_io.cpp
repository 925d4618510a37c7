// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "cavity/geometry.hpp"

namespace cavity
{

void write_mesh(std::ostream &out, const Mesh &mesh)
{
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "nodes " << mesh.num_nodes() << " triangles " << mesh.num_triangles() << '\n';
  for (const Vec2 &p : mesh.nodes()) {
    out << p.x << ' ' << p.y << '\n';
  }
  for (const Triangle &t : mesh.triangles()) {
    out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.region << '\n';
  }
  for (const TaggedEdge &e : mesh.tagged_edges()) {
    out << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
  }
  out.precision(old_precision);
}

Mesh read_mesh(std::istream &in)
{
  auto fail = [](const std::string &what) { throw GeometryError("read_mesh: " + what); };
  std::string word1, word2;
  int n = -1;
  int t = -1;
  if (!(in >> word1 >> n >> word2 >> t) || word1 != "nodes" || word2 != "triangles" || n < 0 ||
      t < 0) {
    fail("malformed header");
  }
  std::vector<Vec2> nodes(n);
  for (auto &p : nodes) {
    if (!(in >> p.x >> p.y)) {
      fail("truncated node list");
    }
  }
  std::vector<Triangle> tris(t);
  for (auto &tr : tris) {
    if (!(in >> tr.v[0] >> tr.v[1] >> tr.v[2] >> tr.region)) {
      fail("truncated triangle list");
    }
  }
  std::vector<TaggedEdge> tags;
  double radius = 0.0;
  TaggedEdge e;
  std::string name;
  while (in >> e.a >> e.b >> name) {
    e.tag = edge_tag_from_string(name);
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) {
      fail("tagged edge references a missing node");
    }
    if (e.tag == EdgeTag::Arc && radius == 0.0) {
      radius = norm(nodes[e.a]);
    }
    tags.push_back(e);
  }
  if (!in.eof()) {
    fail("trailing garbage after the tag list");
  }
  return Mesh(std::move(nodes), std::move(tris), tags, radius);
}

}  // namespace cavity
