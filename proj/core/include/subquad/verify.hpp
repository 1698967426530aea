// Numerical checks of the analytical ingredients: the two-boundary influence
// lower bound on regular trees, empirical decay-rate fitting for supplying
// (C, r) constants, and ball-growth profiling for supplying (C0, d).
#pragma once

#include <vector>

#include "subquad/graph.hpp"
#include "subquad/oracle.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

struct LowerBoundRow {
  int ell = 0;
  double d_tv = 0.0;   // |mu(1) under all-0 boundary - mu(1) under all-1 boundary|
  double bound = 0.0;  // 0.5 * Delta^{-k*ell}
  bool pass = false;
};

struct LowerBoundReport {
  int delta = 0;
  int k = 0;
  double lambda = 0.0;    // 2 / ((Delta-1) Delta^k)
  double base_gap = 0.0;  // |R0 - R1| at the level next to the boundary (informational)
  std::vector<LowerBoundRow> rows;

  bool all_pass() const {
    for (const auto& r : rows) {
      if (!r.pass) return false;
    }
    return true;
  }
};

// Root-marginal gap between the all-0 and all-1 depth-ell boundaries on the
// Delta-regular tree, at the fugacity 2/((Delta-1) Delta^k), for every ell in
// 2..ell_max, each checked against the 0.5 * Delta^{-k*ell} lower bound.
// Requires Delta >= 2, Delta^k >= 4, ell_max >= 2 (OutOfRegime otherwise).
LowerBoundReport weitz_lower_bound(int delta, int k, int ell_max);

struct DecayFit {
  std::vector<double> curve;  // curve[ell-1] = worst-case TV gap at distance ell
  std::vector<char> used;     // points above the numerical floor, used by the fit
  double C = 0.0;
  double r = 0.0;
  bool fitted = false;  // at least two usable points
};

// Exact worst-case boundary influence D(ell) = max over feasible boundary
// pairs on the distance-ell sphere of the TV distance at v, for ell up to
// ell_max, with a least-squares fit of D(ell) ~ C * r^{-ell} on the tail.
DecayFit ssm_decay_fit(const Graph& g, const QSpinParams& m, int v, int ell_max,
                       const OracleCaps& caps = OracleCaps::from_env());

struct GrowthProfile {
  double c0 = 0.0;  // max over v, ell of |B_v(ell)| / ell^d
  int argmax_vertex = -1;
  int argmax_ell = 0;
  bool sampled = false;  // profile used a vertex sample, not every vertex
};

GrowthProfile growth_profile(const Graph& g, int d);

}  // namespace subquad
