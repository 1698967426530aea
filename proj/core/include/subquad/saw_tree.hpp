// Self-avoiding-walk tree of a graph, rooted at a chosen vertex. Each node is
// a walk; extending a walk onto a vertex it already visited closes a cycle
// and produces a forced leaf whose spin depends on how the closing edge
// relates to the cycle's starting edge in the fixed local vertex order
// (ascending adjacency). The root's occupation ratio on this tree equals its
// ratio in the original graph, which is what the estimators exploit.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subquad/graph.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

struct SawNode {
  int g_vertex = -1;
  int parent = -1;  // node id, -1 at the root
  int depth = 0;
  int8_t forced = -1;  // -1 free, else the pinned spin
  bool expanded = false;
  int child_begin = 0;
  int child_count = 0;
};

class SawTree {
 public:
  // `removed` (optional, size n) marks graph vertices to treat as absent;
  // used when a caller works on a vertex-deleted subgraph without rebuilding.
  SawTree(const Graph& g, int root, std::vector<char> removed = {});

  const Graph& graph() const { return *g_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const SawNode& node(int id) const { return nodes_[check(id)]; }
  bool vertex_removed(int g_vertex) const {
    return !removed_.empty() && removed_[static_cast<std::size_t>(g_vertex)];
  }

  bool expandable(int id) const {
    const SawNode& n = nodes_[check(id)];
    return n.forced < 0 && !n.expanded;
  }

  // Materialize the children of a free, unexpanded node. Returns their ids
  // (possibly none, for a walk that cannot continue).
  std::vector<int> expand_node(int id);

  // Expand every free node at depth < l; afterwards the unexpanded free
  // nodes all sit at depth exactly l.
  void expand_to_depth(int l);

  std::vector<int> frontier() const;           // all expandable node ids
  std::vector<int> frontier_at(int depth) const;

  std::string dump_json() const;

 private:
  std::size_t check(int id) const {
    if (id < 0 || id >= size()) throw ArgumentError("node id out of range: " + std::to_string(id));
    return static_cast<std::size_t>(id);
  }

  const Graph* g_;
  std::vector<char> removed_;
  std::vector<SawNode> nodes_;
};

SawTree build_saw(const Graph& g, int v, int l);
SawTree build_saw(const Graph& g, int v, int l, std::vector<char> removed);

// Probability that the root is unoccupied, by the bottom-up ratio recursion
// over the truncated tree. `boundary` pins tree nodes (by node id; it must
// have size t.size()): recursion stops at forced and boundary-pinned nodes,
// and every other unexpanded node must be a natural leaf (no way to extend
// the walk), otherwise the boundary is incomplete and this throws.
double saw_marginal_zero(const SawTree& t, const TwoSpinParams& m,
                         const PartialConfiguration& boundary);

// Both evaluations of the root under the all-0 and all-1 boundary at depth l;
// for antiferromagnetic systems the true unoccupied probability lies between
// them.
struct MarginalInterval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};
MarginalInterval weitz_baseline(const Graph& g, const TwoSpinParams& m, int v, int l);

}  // namespace subquad
