#include "subquad/saw_tree.hpp"

#include <algorithm>

#include "nlohmann/json.hpp"
#include "subquad/errors.hpp"
#include "subquad/oracle.hpp"

namespace subquad {

namespace {

// Path of graph vertices from the root down to node `id`, in walk order.
std::vector<int> root_path(const std::vector<SawNode>& nodes, int id) {
  std::vector<int> path;
  for (int cur = id; cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent)
    path.push_back(nodes[static_cast<std::size_t>(cur)].g_vertex);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

SawTree::SawTree(const Graph& g, int root, std::vector<char> removed)
    : g_(&g), removed_(std::move(removed)) {
  if (!removed_.empty() && removed_.size() != static_cast<std::size_t>(g.vertex_count()))
    throw ArgumentError("removed-vertex mask size mismatch");
  (void)g.neighbors(root);
  if (vertex_removed(root)) throw ArgumentError("walk tree rooted at a removed vertex");
  SawNode r;
  r.g_vertex = root;
  nodes_.push_back(r);
}

std::vector<int> SawTree::expand_node(int id) {
  const std::size_t at = check(id);
  if (nodes_[at].forced >= 0) throw ArgumentError("cannot extend a walk past a closed cycle");
  if (nodes_[at].expanded) throw ArgumentError("node already expanded");

  const std::vector<int> path = root_path(nodes_, id);
  const int k = static_cast<int>(path.size()) - 1;  // tail index
  const int tail = path[static_cast<std::size_t>(k)];
  const int parent_vertex = k >= 1 ? path[static_cast<std::size_t>(k - 1)] : -1;

  std::vector<int> children;
  const int begin = size();
  for (int u : g_->neighbors(tail)) {
    if (u == parent_vertex || vertex_removed(u)) continue;
    SawNode c;
    c.g_vertex = u;
    c.parent = id;
    c.depth = nodes_[at].depth + 1;
    auto seen = std::find(path.begin(), path.end(), u);
    if (seen != path.end()) {
      // The walk closes a cycle at u. Whether u counts as occupied depends on
      // which of the two cycle edges at u comes later in u's adjacency order:
      // entering from the walk's tail after having left toward the cycle's
      // second vertex pins u to 1, the reverse pins it to 0.
      const int j = static_cast<int>(seen - path.begin());
      const int cycle_second = path[static_cast<std::size_t>(j + 1)];
      c.forced = tail > cycle_second ? 1 : 0;
    }
    children.push_back(size());
    nodes_.push_back(c);
  }
  nodes_[at].expanded = true;
  nodes_[at].child_begin = begin;
  nodes_[at].child_count = static_cast<int>(children.size());
  return children;
}

void SawTree::expand_to_depth(int l) {
  if (l < 0) throw ArgumentError("negative depth");
  for (int id = 0; id < size(); ++id) {
    if (nodes_[static_cast<std::size_t>(id)].depth < l && expandable(id)) expand_node(id);
  }
}

std::vector<int> SawTree::frontier() const {
  std::vector<int> out;
  for (int id = 0; id < size(); ++id)
    if (expandable(id)) out.push_back(id);
  return out;
}

std::vector<int> SawTree::frontier_at(int depth) const {
  std::vector<int> out;
  for (int id = 0; id < size(); ++id)
    if (expandable(id) && nodes_[static_cast<std::size_t>(id)].depth == depth) out.push_back(id);
  return out;
}

std::string SawTree::dump_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const SawNode& n : nodes_) {
    nlohmann::json j{{"v", n.g_vertex},
                     {"parent", n.parent},
                     {"depth", n.depth},
                     {"expanded", n.expanded}};
    if (n.forced >= 0) j["forced"] = static_cast<int>(n.forced);
    nlohmann::json kids = nlohmann::json::array();
    for (int c = 0; c < n.child_count; ++c) kids.push_back(n.child_begin + c);
    j["children"] = std::move(kids);
    nodes.push_back(std::move(j));
  }
  nlohmann::json out{{"root_vertex", nodes_.front().g_vertex}, {"nodes", std::move(nodes)}};
  return out.dump(2);
}

SawTree build_saw(const Graph& g, int v, int l) { return build_saw(g, v, l, {}); }

SawTree build_saw(const Graph& g, int v, int l, std::vector<char> removed) {
  SawTree t(g, v, std::move(removed));
  t.expand_to_depth(l);
  return t;
}

namespace {

// True when the walk at `id` has at least one extension, i.e. expanding it
// would create children.
bool walk_extends(const SawTree& t, int id) {
  const SawNode& n = t.node(id);
  const int parent_vertex = n.parent >= 0 ? t.node(n.parent).g_vertex : -1;
  for (int u : t.graph().neighbors(n.g_vertex)) {
    if (u != parent_vertex && !t.vertex_removed(u)) return true;
  }
  return false;
}

Ratio node_ratio(const SawTree& t, const TwoSpinParams& m, const PartialConfiguration& boundary,
                 int id) {
  const SawNode& n = t.node(id);
  if (n.forced >= 0) return n.forced == 1 ? Ratio::inf() : Ratio::finite(0.0);
  if (boundary.is_pinned(id))
    return boundary.spin(id) == 1 ? Ratio::inf() : Ratio::finite(0.0);
  if (!n.expanded) {
    if (walk_extends(t, id))
      throw ArgumentError("walk tree frontier node is neither pinned nor a leaf");
    return Ratio::finite(m.lambda);
  }
  std::vector<RatioFactor> factors;
  factors.reserve(static_cast<std::size_t>(n.child_count));
  for (int c = 0; c < n.child_count; ++c)
    factors.push_back(child_factor(m, node_ratio(t, m, boundary, n.child_begin + c)));
  return combine_ratio(m, factors);
}

}  // namespace

double saw_marginal_zero(const SawTree& t, const TwoSpinParams& m,
                         const PartialConfiguration& boundary) {
  m.validate();
  if (boundary.size() != t.size()) throw ArgumentError("boundary size must match tree size");
  return node_ratio(t, m, boundary, 0).prob_zero();
}

MarginalInterval weitz_baseline(const Graph& g, const TwoSpinParams& m, int v, int l) {
  m.validate();
  if (!m.is_antiferromagnetic())
    throw ArgumentError("two-sided truncation bound needs an antiferromagnetic system");
  SawTree t = build_saw(g, v, l);
  PartialConfiguration zeros(t.size()), ones(t.size());
  for (int id : t.frontier()) {
    zeros.pin(id, 0);
    ones.pin(id, 1);
  }
  const double a = saw_marginal_zero(t, m, zeros);
  const double b = saw_marginal_zero(t, m, ones);
  MarginalInterval out;
  out.lo = std::min(a, b);
  out.hi = std::max(a, b);
  return out;
}

}  // namespace subquad
