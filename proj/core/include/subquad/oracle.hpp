// Exact reference computations: configuration weights, capped brute-force
// partition functions and marginals, the two-spin tree recursion, and exact
// conditional marginals on embedded windows via a sweep DP. Everything here
// is deterministic; the randomized estimators elsewhere are validated against
// these routines.
#pragma once

#include <cstdlib>
#include <vector>

#include "subquad/graph.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

struct OracleCaps {
  int free_vertex_cap = 25;  // brute-force enumeration: max unpinned vertices
  int frontier_cap = 22;     // sweep DP: max cells simultaneously alive

  // SUBQUAD_ORACLE_FREE_CAP / SUBQUAD_GRID_WIDTH_CAP override the defaults.
  static OracleCaps from_env();
};

// Weight of a fully pinned configuration: product of all field and edge
// factors, in log space (zero-weight configurations come back as log 0).
LogWeight config_weight(const Graph& g, const QSpinParams& m, const PartialConfiguration& full);

// log of the total weight of all extensions of `pin` (the pinned factors are
// included, so a fully pinned input reproduces config_weight). Returns -inf
// when no extension has positive weight.
double exact_log_partition(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin,
                           const OracleCaps& caps = {});

// Conditional distribution of unpinned vertex v given `pin`. Throws
// InfeasibleConditioning when every extension has zero weight.
std::vector<double> exact_marginal(const Graph& g, const QSpinParams& m,
                                   const PartialConfiguration& pin, int v,
                                   const OracleCaps& caps = {});

// Occupation ratio mu(1)/mu(0) in [0, +inf]; +inf encodes a vertex forced
// into spin 1.
struct Ratio {
  double value = 0.0;
  bool infinite = false;

  static Ratio inf() { return {0.0, true}; }
  static Ratio finite(double v) { return {v, false}; }
  double prob_one() const { return infinite ? 1.0 : value / (1.0 + value); }
  double prob_zero() const { return infinite ? 0.0 : 1.0 / (1.0 + value); }
};

// One child's multiplicative contribution to its parent's ratio:
// (gamma * R + 1) / (R + beta), extended to R = +inf by its limit gamma.
// A zero denominator with positive numerator yields an infinite factor.
struct RatioFactor {
  double value = 0.0;
  bool infinite = false;
};
RatioFactor child_factor(const TwoSpinParams& m, Ratio child);

// lambda times the product of child factors, with the 0 and +inf cases
// resolved; a simultaneous zero and infinite factor means the conditioning is
// contradictory and throws.
Ratio combine_ratio(const TwoSpinParams& m, const std::vector<RatioFactor>& factors);

// Bottom-up evaluation of the ratio recursion at `root`. The component of
// `root` must be a tree. Pinned vertices contribute ratio 0 or +inf and cut
// recursion below themselves. Throws InfeasibleConditioning when a 0 * inf
// factor product makes the conditioning contradictory.
Ratio tree_ratio(const Graph& g, const TwoSpinParams& m, const PartialConfiguration& pin,
                 int root);

// Exact log partition function of the subgraph induced by `cells`, given
// `pin`. Interaction factors toward pinned vertices outside the window are
// folded in; an unpinned cell with an unpinned neighbor outside the window is
// a contract violation. Cells need coordinates (the sweep order is by x,
// then y).
double window_log_partition(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin,
                            std::span<const int> cells, const OracleCaps& caps = {});

// Exact conditional distribution of `v` inside the window `window.ball()`.
// Every unpinned cell must have all its neighbors inside the window or
// pinned; this holds in particular when the window is a ball whose sphere is
// fully pinned. Falls back to exact_marginal when the graph carries no
// embedding.
std::vector<double> grid_marginal(const Graph& g, const QSpinParams& m,
                                  const PartialConfiguration& pin, int v,
                                  const DistanceShell& window, const OracleCaps& caps = {});

}  // namespace subquad
