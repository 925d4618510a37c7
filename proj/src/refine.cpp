// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "cavity/geometry.hpp"

namespace cavity
{

namespace
{

std::uint64_t key_of(int a, int b)
{
  if (a > b) {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Mutable working copy used during one refinement call.
class Bisector
{
public:
  explicit Bisector(const Mesh &mesh)
    : nodes_(mesh.nodes()), tris_(mesh.triangles()), alive_(tris_.size(), true),
      origin_(tris_.size()), R_(mesh.arc_radius())
  {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      origin_[t] = t;
    }
    for (const auto &e : mesh.edges()) {
      adj_[key_of(e.v[0], e.v[1])] = e.tri;
      if (e.tag != EdgeTag::Interior) {
        tags_[key_of(e.v[0], e.v[1])] = e.tag;
      }
    }
  }

  bool alive(int t) const { return alive_[t]; }

  void bisect(int t, int depth = 0)
  {
    if (depth > 64 * 1024) {
      throw GeometryError("refine: closure recursion does not terminate");
    }
    const int a = tris_[t].v[0];
    const int b = tris_[t].v[1];
    const std::uint64_t k = key_of(a, b);
    // Make the neighbour across the refinement edge compatible first.
    for (;;) {
      const int nb = other(k, t);
      if (nb < 0) {
        break;
      }
      const auto &w = tris_[nb].v;
      if (key_of(w[0], w[1]) == k) {
        break;
      }
      bisect(nb, depth + 1);
    }
    const int nb = other(k, t);
    const int m = midpoint(a, b);
    split(t, m);
    if (nb >= 0) {
      split(nb, m);
    }
    adj_.erase(k);
    tags_.erase(k);
  }

  Mesh finish(const Mesh &source) const
  {
    std::vector<Triangle> tris;
    std::vector<int> parent;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (alive_[t]) {
        tris.push_back(tris_[t]);
        parent.push_back(origin_[t]);
      }
    }
    std::vector<TaggedEdge> tags;
    tags.reserve(tags_.size());
    for (const auto &[k, tag] : tags_) {
      tags.push_back({static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), tag});
    }
    std::sort(tags.begin(), tags.end(), [](const TaggedEdge &x, const TaggedEdge &y) {
      return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    return Mesh(nodes_, std::move(tris), tags, source.arc_radius(), source.generation() + 1,
                std::move(parent));
  }

private:
  int other(std::uint64_t k, int t) const
  {
    const auto it = adj_.find(k);
    if (it == adj_.end()) {
      throw GeometryError("refine: lost edge adjacency");
    }
    return it->second[0] == t ? it->second[1] : it->second[0];
  }

  void replace(std::uint64_t k, int from, int to)
  {
    auto &p = adj_.at(k);
    if (p[0] == from) {
      p[0] = to;
    } else if (p[1] == from) {
      p[1] = to;
    } else {
      throw GeometryError("refine: inconsistent edge adjacency");
    }
  }

  void attach(std::uint64_t k, int t)
  {
    auto [it, inserted] = adj_.try_emplace(k, std::array<int, 2>{t, -1});
    if (!inserted) {
      it->second[1] = t;
    }
  }

  int midpoint(int a, int b)
  {
    const std::uint64_t k = key_of(a, b);
    if (const auto it = mid_.find(k); it != mid_.end()) {
      return it->second;
    }
    Vec2 m = 0.5 * (nodes_[a] + nodes_[b]);
    const auto tag = tags_.find(k);
    if (tag != tags_.end() && tag->second == EdgeTag::Arc) {
      const double phi = std::atan2(m.y, m.x);
      m = {R_ * std::cos(phi), R_ * std::sin(phi)};
    }
    nodes_.push_back(m);
    const int id = static_cast<int>(nodes_.size() - 1);
    mid_[k] = id;
    if (tag != tags_.end()) {
      tags_[key_of(a, id)] = tag->second;
      tags_[key_of(id, b)] = tag->second;
    }
    return id;
  }

  // (v0, v1, v2) with midpoint m of v0-v1 becomes (v2, v0, m) and (v1, v2, m).
  void split(int t, int m)
  {
    const auto [v0, v1, v2] = tris_[t].v;
    const int region = tris_[t].region;
    const int c1 = static_cast<int>(tris_.size());
    const int c2 = c1 + 1;
    tris_.push_back({{v2, v0, m}, region});
    tris_.push_back({{v1, v2, m}, region});
    alive_.push_back(true);
    alive_.push_back(true);
    origin_.push_back(origin_[t]);
    origin_.push_back(origin_[t]);
    alive_[t] = false;

    replace(key_of(v2, v0), t, c1);
    replace(key_of(v1, v2), t, c2);
    attach(key_of(v0, m), c1);
    attach(key_of(m, v1), c2);
    attach(key_of(v2, m), c1);
    attach(key_of(v2, m), c2);
  }

  std::vector<Vec2> nodes_;
  std::vector<Triangle> tris_;
  std::vector<bool> alive_;
  std::vector<int> origin_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> adj_;
  std::unordered_map<std::uint64_t, EdgeTag> tags_;
  std::unordered_map<std::uint64_t, int> mid_;
  double R_;
};

}  // namespace

Mesh refine(const Mesh &mesh, std::span<const int> marked)
{
  if (marked.empty()) {
    throw PreconditionError("refine: no triangle marked");
  }
  for (int t : marked) {
    if (t < 0 || t >= mesh.num_triangles()) {
      throw PreconditionError("refine: triangle id " + std::to_string(t) + " out of range");
    }
  }
  Bisector work(mesh);
  for (int t : marked) {
    if (work.alive(t)) {
      work.bisect(t);
    }
  }
  return work.finish(mesh);
}

}  // namespace cavity
