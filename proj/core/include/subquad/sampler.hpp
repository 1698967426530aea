// Recursive single-vertex marginal sampler for the hard-core model, its step
// budget, and the dominating branching process. The sampler draws the spin of
// one vertex under the conditional Gibbs distribution by lazily resolving
// neighbor spins; it works both on a plain graph and on a lazily expanded
// walk tree through a small view interface.
#pragma once

#include <cstdint>
#include <vector>

#include "subquad/errors.hpp"
#include "subquad/graph.hpp"
#include "subquad/rng.hpp"
#include "subquad/saw_tree.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

// Global step timer for one recursive sampling run: every sampler invocation
// consumes exactly one step; an empty budget aborts the run.
struct Budget {
  std::int64_t remaining = 0;
  std::int64_t consumed = 0;

  explicit Budget(std::int64_t steps) : remaining(steps) {
    if (steps < 0) throw ArgumentError("negative step budget");
  }

  void consume() {
    if (remaining <= 0) throw BudgetExhausted("sampler step budget exhausted");
    --remaining;
    ++consumed;
  }
};

// Step cap T making one recursive draw fail (exhaust its budget) with
// probability at most eps, valid for lambda < 1/(delta-1).
std::int64_t budget_for(int delta, double lambda, double eps);

// The Markov chain dominating the number of live sampler invocations:
// from X=1, X += delta-1 with probability p, else X -= 1, absorbed at 0.
struct BranchingParams {
  int delta = 0;
  double p = 0.0;

  static BranchingParams hardcore(int delta, double lambda);
  void validate() const;
};

// Empirical probability that the dominating chain is not yet absorbed after
// steps transitions, over the given number of independent trials.
double branching_tail(const BranchingParams& bp, std::int64_t steps, int trials, RngStream& rng);

// Sampler-facing access to a graph with a mutable pinning. Neighbor order is
// ascending vertex id; vertices in the optional removed mask are invisible.
class GraphSamplingView {
 public:
  GraphSamplingView(const Graph& g, PartialConfiguration& pin)
      : g_(&g), pin_(&pin), removed_(nullptr) {
    if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  }
  GraphSamplingView(const Graph& g, PartialConfiguration& pin, const std::vector<char>& removed)
      : g_(&g), pin_(&pin), removed_(&removed) {
    if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
    if (removed.size() != static_cast<std::size_t>(g.vertex_count()))
      throw ArgumentError("removed-vertex mask size mismatch");
  }

  bool is_pinned(int v) const { return pin_->is_pinned(v); }
  int spin(int v) const { return pin_->spin(v); }
  void set_spin(int v, int s) { pin_->pin(v, s); }
  void clear_spin(int v) { pin_->unpin(v); }

  void append_neighbors(int v, std::vector<int>& out) const {
    for (int u : g_->neighbors(v)) {
      if (removed_ && (*removed_)[static_cast<std::size_t>(u)]) continue;
      out.push_back(u);
    }
  }

 private:
  const Graph* g_;
  PartialConfiguration* pin_;
  const std::vector<char>* removed_;
};

// Sampler-facing access to a walk tree: a node's neighbors are its parent and
// its children, materialized on demand, so the sampler can wander below the
// built depth. Cycle-forced nodes read as pinned.
class SawSamplingView {
 public:
  explicit SawSamplingView(SawTree& t) : t_(&t) {}

  bool is_pinned(int id) const;
  int spin(int id) const;
  void set_spin(int id, int s);
  void clear_spin(int id);
  void append_neighbors(int id, std::vector<int>& out);  // expands id if needed

  SawTree& tree() { return *t_; }

 private:
  SawTree* t_;
  std::vector<std::int8_t> spins_;  // by node id; -1 free, lazily sized
};

// Draw the spin of unpinned vertex v under the hard-core conditional
// distribution given the view's current pinning. One timer step per
// invocation; a pinned-occupied neighbor forces 0; otherwise occupation
// requires winning a lambda/(1+lambda) coin and all neighbors resolving to 0,
// neighbors being resolved by recursion whose extensions are rolled back on
// return. On normal return v is pinned to the result and all other vertices
// are as on entry; on BudgetExhausted the view is fully restored.
template <class View>
int hardcore_sample(View& view, double lambda, int v, Budget& budget, RngStream& rng) {
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  if (view.is_pinned(v)) throw ArgumentError("cannot sample a pinned vertex");
  budget.consume();

  std::vector<int> nbrs;
  view.append_neighbors(v, nbrs);
  for (int u : nbrs) {
    if (view.is_pinned(u) && view.spin(u) == 1) {
      view.set_spin(v, 0);
      return 0;
    }
  }

  if (!rng.bernoulli(lambda / (1.0 + lambda))) {
    view.set_spin(v, 0);
    return 0;
  }

  int all_empty = 1;
  std::vector<int> extended;
  extended.reserve(nbrs.size());
  try {
    for (int u : nbrs) {
      int su;
      if (view.is_pinned(u)) {
        su = view.spin(u);  // resolved by an earlier sibling recursion
      } else {
        su = hardcore_sample(view, lambda, u, budget, rng);
        extended.push_back(u);
      }
      if (su == 1) all_empty = 0;
    }
  } catch (...) {
    for (int u : extended) view.clear_spin(u);
    throw;
  }
  for (int u : extended) view.clear_spin(u);
  view.set_spin(v, all_empty);
  return all_empty;
}

}  // namespace subquad
