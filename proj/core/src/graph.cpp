#include "subquad/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

#include "subquad/rng.hpp"

namespace subquad {

Graph Graph::from_edges(int n, const std::vector<Edge>& edges,
                        std::optional<std::vector<Coord>> coords) {
  if (n < 0) throw ArgumentError("vertex count must be nonnegative");
  Graph g;
  g.adj_.assign(static_cast<std::size_t>(n), {});
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ArgumentError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                          std::to_string(v) + ")");
    if (u == v) throw ArgumentError("self-loop at vertex " + std::to_string(u));
    g.adj_[static_cast<std::size_t>(u)].push_back(v);
    g.adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (int v = 0; v < n; ++v) {
    auto& a = g.adj_[static_cast<std::size_t>(v)];
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw ArgumentError("duplicate edge at vertex " + std::to_string(v));
    g.max_degree_ = std::max(g.max_degree_, static_cast<int>(a.size()));
  }
  g.edge_count_ = static_cast<int>(edges.size());

  if (coords) {
    if (static_cast<int>(coords->size()) != n)
      throw ArgumentError("coordinate list size does not match vertex count");
    std::set<Coord> seen;
    for (const auto& c : *coords)
      if (!seen.insert(c).second)
        throw ArgumentError("duplicate coordinate (" + std::to_string(c[0]) + ", " +
                            std::to_string(c[1]) + ")");
    for (const auto& [u, v] : edges) {
      const auto& a = (*coords)[static_cast<std::size_t>(u)];
      const auto& b = (*coords)[static_cast<std::size_t>(v)];
      if (std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) != 1)
        throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") is not unit length in the embedding");
    }
    g.coords_ = std::move(coords);
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj_[static_cast<std::size_t>(check(u))];
  check(v);
  return std::binary_search(a.begin(), a.end(), v);
}

const Coord& Graph::coord(int v) const {
  if (!coords_) throw ArgumentError("graph has no embedding");
  return (*coords_)[static_cast<std::size_t>(check(v))];
}

const std::vector<Coord>& Graph::coords() const {
  if (!coords_) throw ArgumentError("graph has no embedding");
  return *coords_;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : adj_[static_cast<std::size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

uint64_t Graph::digest() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](uint64_t x) {
    h ^= detail::splitmix64(x);
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<uint64_t>(vertex_count()));
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : adj_[static_cast<std::size_t>(u)])
      if (u < v) mix((static_cast<uint64_t>(u) << 32) | static_cast<uint64_t>(v));
  if (coords_) {
    mix(0x636f6f7264ULL);  // marks presence of an embedding
    for (const auto& c : *coords_) {
      mix(static_cast<uint64_t>(static_cast<int64_t>(c[0])));
      mix(static_cast<uint64_t>(static_cast<int64_t>(c[1])));
    }
  }
  return h;
}

DistanceShell ball(const Graph& g, int v, int radius) {
  if (radius < 0) throw ArgumentError("ball radius must be nonnegative");
  (void)g.neighbors(v);  // range-check v
  DistanceShell out;
  out.center = v;
  out.radius = radius;
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> level{v};
  dist[static_cast<std::size_t>(v)] = 0;
  out.vertices.push_back(v);
  out.distance.push_back(0);
  out.sphere_begin = 0;
  for (int d = 1; d <= radius && !level.empty(); ++d) {
    std::vector<int> next;
    for (int u : level)
      for (int w : g.neighbors(u))
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = d;
          next.push_back(w);
        }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (!next.empty()) out.sphere_begin = out.vertices.size();
    for (int w : next) {
      out.vertices.push_back(w);
      out.distance.push_back(d);
    }
    level = std::move(next);
  }
  // An empty final level means the sphere at `radius` is empty.
  if (!out.distance.empty() && out.distance.back() < radius) out.sphere_begin = out.vertices.size();
  if (radius == 0) out.sphere_begin = 0;
  return out;
}

ThinSphere find_thin_sphere(const Graph& g, int v, int l, double c0) {
  if (l < 2) throw ArgumentError("thin-sphere search needs radius window >= 2");
  if (c0 <= 0) throw ArgumentError("growth constant must be positive");
  const int lo = (l + 1) / 2;
  const double cap = 2.0 * c0 * static_cast<double>(l);
  DistanceShell full = ball(g, v, l);
  for (int r = lo; r <= l; ++r) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < full.vertices.size(); ++i)
      if (full.distance[i] == r) ++count;
    if (static_cast<double>(count) <= cap) {
      ThinSphere out;
      out.radius = r;
      out.shell.center = v;
      out.shell.radius = r;
      for (std::size_t i = 0; i < full.vertices.size(); ++i)
        if (full.distance[i] <= r) {
          out.shell.vertices.push_back(full.vertices[i]);
          out.shell.distance.push_back(full.distance[i]);
        }
      out.shell.sphere_begin = out.shell.vertices.size() - count;
      if (count == 0) out.shell.sphere_begin = out.shell.vertices.size();
      return out;
    }
  }
  throw GrowthAssumptionViolated("no sphere of size <= " + std::to_string(cap) +
                                 " in radius window [" + std::to_string(lo) + ", " +
                                 std::to_string(l) + "] around vertex " + std::to_string(v));
}

Components connected_components(const Graph& g) {
  Components out;
  out.label.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (out.label[static_cast<std::size_t>(v)] >= 0) continue;
    std::vector<int> stack{v};
    out.label[static_cast<std::size_t>(v)] = out.count;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(u))
        if (out.label[static_cast<std::size_t>(w)] < 0) {
          out.label[static_cast<std::size_t>(w)] = out.count;
          stack.push_back(w);
        }
    }
    ++out.count;
  }
  return out;
}

}  // namespace subquad
