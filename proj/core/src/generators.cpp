#include <algorithm>
#include <map>
#include <set>

#include "subquad/graph.hpp"
#include "subquad/rng.hpp"

namespace subquad {

Graph gen_grid(int w, int h, const std::vector<Coord>& deleted) {
  if (w < 1 || h < 1) throw ArgumentError("grid dimensions must be positive");
  std::set<Coord> gone;
  for (const auto& c : deleted) {
    if (c[0] < 0 || c[0] >= w || c[1] < 0 || c[1] >= h)
      throw ArgumentError("deleted cell outside grid: (" + std::to_string(c[0]) + ", " +
                          std::to_string(c[1]) + ")");
    gone.insert(c);
  }
  std::map<Coord, int> id;
  std::vector<Coord> coords;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Coord c{x, y};
      if (gone.count(c)) continue;
      id[c] = static_cast<int>(coords.size());
      coords.push_back(c);
    }
  std::vector<Edge> edges;
  for (const auto& [c, u] : id) {
    for (Coord d : {Coord{c[0] + 1, c[1]}, Coord{c[0], c[1] + 1}}) {
      auto it = id.find(d);
      if (it != id.end()) edges.emplace_back(u, it->second);
    }
  }
  const int n = static_cast<int>(coords.size());
  return Graph::from_edges(n, edges, std::move(coords));
}

Graph gen_regular_tree(int delta, int depth) {
  if (delta < 1) throw ArgumentError("tree degree must be >= 1");
  if (depth < 0) throw ArgumentError("tree depth must be >= 0");
  std::vector<Edge> edges;
  int next = 1;
  std::vector<int> level{0};
  for (int d = 1; d <= depth; ++d) {
    std::vector<int> children;
    const int fanout = (d == 1) ? delta : delta - 1;
    for (int u : level)
      for (int j = 0; j < fanout; ++j) {
        edges.emplace_back(u, next);
        children.push_back(next++);
      }
    level = std::move(children);
  }
  return Graph::from_edges(next, edges);
}

Graph gen_random_bounded(int n, int delta, uint64_t seed) {
  if (n < 1) throw ArgumentError("vertex count must be >= 1");
  if (delta < 2 && n > 1) throw ArgumentError("degree bound must be >= 2 to connect the graph");
  RngStream rng = RngStream::derive(seed, "gen-random-bounded");
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  std::vector<Edge> edges;
  std::set<Edge> present;
  auto add = [&](int u, int v) {
    edges.emplace_back(u, v);
    present.insert({std::min(u, v), std::max(u, v)});
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  };
  // Random spanning tree first, so the result is always connected.
  for (int v = 1; v < n; ++v) {
    std::vector<int> open;
    for (int u = 0; u < v; ++u)
      if (deg[static_cast<std::size_t>(u)] < delta) open.push_back(u);
    if (open.empty()) throw InternalError("no attachment point with spare degree");
    add(open[rng.next_below(open.size())], v);
  }
  // Densify with random extra edges while the bound and simplicity allow.
  const int attempts = 3 * n * delta;
  for (int t = 0; t < attempts && n > 1; ++t) {
    int u = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    int v = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    if (u == v) continue;
    if (deg[static_cast<std::size_t>(u)] >= delta || deg[static_cast<std::size_t>(v)] >= delta)
      continue;
    if (present.count({std::min(u, v), std::max(u, v)})) continue;
    add(u, v);
  }
  return Graph::from_edges(n, edges);
}

namespace {

struct Drawing {
  std::set<Coord> points;
  std::set<std::pair<Coord, Coord>> segments;  // unit steps, endpoint-sorted
  std::vector<Coord> leaves;

  void unit_edge(Coord a, Coord b) {
    points.insert(a);
    points.insert(b);
    segments.insert({std::min(a, b), std::max(a, b)});
  }

  void segment(Coord a, Coord b) {
    const int dx = (b[0] > a[0]) - (b[0] < a[0]);
    const int dy = (b[1] > a[1]) - (b[1] < a[1]);
    Coord p = a;
    while (p != b) {
      Coord q{p[0] + dx, p[1] + dy};
      unit_edge(p, q);
      p = q;
    }
  }
};

// H with arm `s` centered at (cx, cy): a crossbar and two verticals whose
// four tips either recurse with arm s/2 or, at arm 1, become leaves. Every
// center-to-tip path has length exactly 2s, so all root-to-leaf distances
// agree.
void draw_htree(Drawing& d, int cx, int cy, int s) {
  d.segment({cx - s, cy}, {cx + s, cy});
  d.segment({cx - s, cy - s}, {cx - s, cy + s});
  d.segment({cx + s, cy - s}, {cx + s, cy + s});
  for (int dx : {-s, s})
    for (int dy : {-s, s}) {
      if (s > 1)
        draw_htree(d, cx + dx, cy + dy, s / 2);
      else
        d.leaves.push_back({cx + dx, cy + dy});
    }
}

}  // namespace

QuadBoundaryGraph gen_quad_boundary(int n) {
  if (n < 16 || n % 2 != 0) throw ArgumentError("target distance must be even and >= 16");
  // Half-distance budget before subdivision. The H recursion with top arm
  // s = 2^(k-1) spends 4s - 2 of it; a straight tail below the root supplies
  // the remainder (always >= 2 by the choice of k).
  const int half = n / 2;
  int k = 2;
  while ((1 << (k + 2)) <= half) ++k;
  const int s = 1 << (k - 1);
  const int tail = half - (4 * s - 2);

  Drawing d;
  draw_htree(d, 0, 0, s);
  d.segment({0, 0}, {0, -tail});

  // Double every coordinate and split each unit step with a midpoint vertex.
  // Doubled originals sit on even-even points and midpoints carry exactly one
  // odd coordinate, so no two branches of the drawing end up adjacent in the
  // grid: the embedded graph stays a tree and all distances double.
  std::map<Coord, int> id;
  std::vector<Coord> coords;
  auto intern = [&](Coord c) {
    auto [it, fresh] = id.try_emplace(c, static_cast<int>(coords.size()));
    if (fresh) coords.push_back(c);
    return it->second;
  };
  std::vector<Edge> edges;
  for (const auto& [a, b] : d.segments) {
    Coord da{2 * a[0], 2 * a[1]}, db{2 * b[0], 2 * b[1]};
    Coord mid{a[0] + b[0], a[1] + b[1]};
    edges.emplace_back(intern(da), intern(mid));
    edges.emplace_back(intern(mid), intern(db));
  }

  QuadBoundaryGraph out;
  out.start = intern({0, -2 * tail});
  out.target_distance = n;
  out.leaf_count = static_cast<int>(d.leaves.size());
  const int vertex_total = static_cast<int>(coords.size());
  out.graph = Graph::from_edges(vertex_total, edges, std::move(coords));
  return out;
}

}  // namespace subquad
