// Simple undirected graphs with dense vertex ids, sorted adjacency, and
// optional 2D integer coordinates for grid-embedded inputs. The sorted
// adjacency order doubles as the fixed local vertex ordering used by the
// walk-tree construction, so it is part of the contract, not a convenience.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subquad/errors.hpp"

namespace subquad {

using Edge = std::pair<int, int>;
using Coord = std::array<int, 2>;

class Graph {
 public:
  Graph() = default;

  // Validates and canonicalizes: ids in range, no self-loops, no duplicate
  // edges, adjacency sorted ascending. If coords are given there must be one
  // per vertex, all distinct, and every edge must have unit L1 length.
  static Graph from_edges(int n, const std::vector<Edge>& edges,
                          std::optional<std::vector<Coord>> coords = std::nullopt);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }
  int max_degree() const { return max_degree_; }
  int degree(int v) const { return static_cast<int>(adj_[check(v)].size()); }
  std::span<const int> neighbors(int v) const {
    const auto& a = adj_[check(v)];
    return {a.data(), a.size()};
  }
  bool has_edge(int u, int v) const;

  bool has_coords() const { return coords_.has_value(); }
  const Coord& coord(int v) const;
  const std::vector<Coord>& coords() const;

  std::vector<Edge> edges() const;  // u < v, lexicographic

  // Stable fingerprint of the canonical form (n, sorted edge list, coords).
  uint64_t digest() const;

 private:
  int check(int v) const {
    if (v < 0 || v >= vertex_count()) throw ArgumentError("vertex id out of range: " + std::to_string(v));
    return v;
  }

  std::vector<std::vector<int>> adj_;
  std::optional<std::vector<Coord>> coords_;
  int max_degree_ = 0;
  int edge_count_ = 0;
};

// Ball and sphere of a BFS exploration, in a deterministic order:
// ascending distance, ties broken by ascending vertex id.
struct DistanceShell {
  int center = -1;
  int radius = 0;
  std::vector<int> vertices;   // the ball B(center, radius)
  std::vector<int> distance;   // parallel to `vertices`
  std::size_t sphere_begin = 0;  // first index at exact distance `radius`

  std::span<const int> ball() const { return {vertices.data(), vertices.size()}; }
  std::span<const int> sphere() const {
    return {vertices.data() + sphere_begin, vertices.size() - sphere_begin};
  }
};

// BFS ball of radius `radius` around v. radius >= 0.
DistanceShell ball(const Graph& g, int v, int radius);

// Smallest radius r in [ceil(l/2), l] whose sphere has at most 2*c0*l
// vertices. Throws GrowthAssumptionViolated when no radius in the window
// qualifies. Requires l >= 2.
struct ThinSphere {
  int radius = 0;
  DistanceShell shell;
};
ThinSphere find_thin_sphere(const Graph& g, int v, int l, double c0);

// Component id per vertex (ids are 0-based, assigned in ascending order of
// the smallest vertex in each component) plus the component count.
struct Components {
  std::vector<int> label;
  int count = 0;
};
Components connected_components(const Graph& g);

// Generators. All of them produce canonical Graphs (see from_edges).

// Axis-aligned w x h grid with the listed cells removed. Kept cells are
// renumbered densely in row-major order ((x, y) sorted by y, then x).
Graph gen_grid(int w, int h, const std::vector<Coord>& deleted = {});

// Rooted tree where the root has `delta` children and every other internal
// vertex has `delta - 1`; all leaves sit at distance `depth` from the root.
// Vertex 0 is the root; ids are assigned level by level.
Graph gen_regular_tree(int delta, int depth);

// Connected random graph with max degree <= delta: a random spanning tree
// respecting the degree bound, then extra random edges while the bound and
// simplicity allow. Deterministic in (n, delta, seed).
Graph gen_random_bounded(int n, int delta, uint64_t seed);

// Grid-embedded graph with quadratically many vertices at distance exactly n
// from a start vertex: an H-tree layout whose root-to-leaf paths all have
// equal length, padded by a tail path and subdivided so the drawing is an
// induced subgraph of the integer grid. Requires n >= 16 and n even.
struct QuadBoundaryGraph {
  Graph graph;
  int start = 0;
  int target_distance = 0;  // the n that was requested
  int leaf_count = 0;       // number of vertices at distance exactly n
};
QuadBoundaryGraph gen_quad_boundary(int n);

}  // namespace subquad
