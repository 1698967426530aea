// Near-linear marginal estimation and approximate counting for the hard-core
// model. One marginal estimate truncates the walk tree at a depth where the
// boundary influence is below 1/sqrt(n), samples the boundary spins with the
// recursive sampler, and evaluates the truncated tree exactly under that
// boundary; the result is an unbiased estimate of the unoccupied probability.
// Averaging products of such estimates along a vertex-elimination order gives
// a randomized approximation scheme for the partition function.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subquad/graph.hpp"
#include "subquad/saw_tree.hpp"

namespace subquad {

struct HardcoreEstimatorConfig {
  int k = 1;             // decay exponent: designed for lambda < 1/(Delta^k (Delta-1))
  double C = 1.0;        // decay constant in the truncation depth
  double fail = 0.05;    // failure budget of one marginal estimate (split over its boundary)
  int delta = 0;         // max degree to size budgets with; 0 = read from the graph
  int ell_override = 0;  // truncation depth; 0 = formula
  std::uint64_t seed = 0;
  int threads = 1;
  std::int64_t sample_cap = 0;   // counting: cap on averaged samples, 0 = none
  std::int64_t wall_cap_ms = 0;  // counting: wall-clock cap, 0 = none
};

// Static regime diagnostics. Never throws: callers decide whether to proceed.
struct RegimeReport {
  int delta = 0;
  double lambda = 0.0;
  int k = 1;
  bool estimator_regime = false;  // lambda < 1 / (Delta^k (Delta - 1))
  bool sampler_regime = false;    // lambda < 1 / (Delta - 1)
  double lambda_uniqueness = 0.0;  // (Delta-1)^(Delta-1) / (Delta-2)^Delta; inf for Delta <= 2
  std::vector<std::string> warnings;
};
RegimeReport check_regime(int delta, double lambda, int k);

// ceil((log(n)/2 - log(C)) / (k log Delta)), at least 1: the depth at which a
// decay rate Delta^{-k} with constant C drops below n^{-1/2}.
int truncation_depth(int n, int delta, int k, double C);

// One boundary-sampled evaluation of mu_v(spin 0), with diagnostics.
struct MarginalEstimate {
  double value = 0.0;
  int boundary_size = 0;          // frontier nodes that were sampled
  std::int64_t tree_nodes = 0;    // final walk-tree size
  std::int64_t steps_consumed = 0;
  int retries = 0;                // exhausted attempts that were retried
  int ell = 0;
};

// cfg.fail is this call's failure budget: each boundary node gets a step cap
// making one attempt exhaust with probability <= cfg.fail/(8*frontier), and
// up to 16 attempts on fresh streams before giving up (SamplerStuck). The
// `removed` overload works on the vertex-deleted subgraph.
MarginalEstimate estimate_marginal_zero(const Graph& g, double lambda, int v,
                                        const HardcoreEstimatorConfig& cfg,
                                        std::uint64_t stream_seed);
MarginalEstimate estimate_marginal_zero(const Graph& g, const std::vector<char>& removed,
                                        double lambda, int v, const HardcoreEstimatorConfig& cfg,
                                        std::uint64_t stream_seed);

// Deterministic two-sided truncation bound on mu_v(spin 0).
MarginalInterval weitz_baseline(const Graph& g, double lambda, int v, int ell);

struct CountEstimate {
  double log_z = 0.0;
  double eps = 0.0;
  std::int64_t samples = 0;  // averaged products (per run, not per copy)
  int copies = 0;
  int ell = 0;    // depth used for the full union graph (it shrinks with it)
  int delta = 0;
  double per_call_failure = 0.0;
  bool truncated = false;  // a cap cut `samples` below the guarantee size
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

// Partition-function estimate with P[|Z_hat/Z - 1| > eps] <= 1/4 when no cap
// triggers. Runs t = ceil(2/eps) disjoint copies and averages
// N = ceil(8 e^{(1+lambda)^2} / eps0^2) telescoping products.
CountEstimate fpras_hardcore(const Graph& g, double lambda, double eps,
                             const HardcoreEstimatorConfig& cfg);

}  // namespace subquad
