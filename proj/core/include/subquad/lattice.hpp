// Counting pipeline for graphs of polynomial growth: conditional-marginal
// tables over thin spheres, the table-lookup marginal estimator fed by the
// generic recursive sampler, greedy construction of a well-supported full
// configuration, and the resulting partition-function approximation scheme.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subquad/estimator.hpp"
#include "subquad/graph.hpp"
#include "subquad/lazy_sampler.hpp"
#include "subquad/oracle.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

// Growth and decay constants supplied by the caller: |B_v(l)| <= c0 * l^d,
// and boundary influence at distance l bounded by C * r^{-l}.
struct GrowthParams {
  double c0 = 5.0;
  int d = 2;
  double C = 1.0;
  double r = 2.0;

  void validate() const;
  // The growth bound at l=1 forces max degree <= c0.
  void validate_for(const Graph& g) const;
};

// Exact conditional distributions of a center vertex for every configuration
// of the free part of a sphere around it. Rows are indexed mixed-radix over
// free_boundary (first vertex = least significant digit); infeasible rows
// hold -1 in every slot.
struct BoundaryTable {
  int center = -1;
  int ell_prime = 0;
  int q = 0;
  std::vector<int> free_boundary;  // ascending vertex ids
  std::vector<double> entries;     // rows() * q values
  std::vector<char> feasible;

  std::int64_t rows() const { return static_cast<std::int64_t>(feasible.size()); }
  std::span<const double> row(std::int64_t idx) const {
    return {entries.data() + idx * q, static_cast<std::size_t>(q)};
  }
  std::int64_t index_of(std::span<const int> spins) const;
};

// Depth used by the d=2 counting pipeline; grows with log n, clamped to the
// window where thin-sphere search and table enumeration stay affordable.
int quad_depth(int n);

// ceil(0.99 * (log n)^{1/d} / (2 * c0 * log q)), at least 1 (d >= 3 path).
int poly_growth_depth(int n, const GrowthParams& gp, int q);

// Smallest recursion radius satisfying the generic sampler's convergence
// condition 2 e q (1 + s(r)) C r^{-radius} <= 1 with s(r) = c0 * r^d, among
// radii whose actual spheres in g stay enumerable; falls back to a weaker
// contraction criterion with a warning when none works.
int recursion_radius(const Graph& g, int q, const GrowthParams& gp,
                     std::vector<std::string>* warnings = nullptr);

// Step cap for one recursive draw at radius r with failure probability eps_b.
std::int64_t lattice_budget(int r, const GrowthParams& gp, double eps_b);

// Build the table for v at depth ell: thin-sphere search for d=2, the
// distance-ell sphere directly for d>=3. `pin` is restored before returning.
BoundaryTable build_boundary_table(const Graph& g, const QSpinParams& m,
                                   PartialConfiguration& pin, int v, int ell,
                                   const GrowthParams& gp,
                                   const OracleCaps& caps = OracleCaps::from_env());

// Mean of m = ceil(n C^2 r^{-ell'}) table lookups under boundary draws from
// the generic sampler; unbiased for the conditional probability of k_spin at
// the table's center. The prebuilt-table overload reuses the sampler's caches
// across calls.
MarginalEstimate lattice_table_estimate(const Graph& g, const BoundaryTable& table,
                                        LazySampler& sampler, PartialConfiguration& pin,
                                        int k_spin, std::int64_t m_draws, const GrowthParams& gp,
                                        double delta_fail, std::uint64_t stream_seed);
MarginalEstimate lattice_marginal_estimator(const Graph& g, const QSpinParams& m,
                                            PartialConfiguration& pin, int v, int k_spin, int ell,
                                            const GrowthParams& gp, double delta_fail,
                                            std::uint64_t stream_seed,
                                            const OracleCaps& caps = OracleCaps::from_env());

// Full configuration built greedily along `order`: each vertex gets the spin
// with the largest conditional marginal under an all-spin-0 boundary on its
// free distance-t sphere, t sized so the decay margin keeps the true mass
// above 1/(2q).
struct AdaptivePinning {
  std::vector<int> order;
  PartialConfiguration sigma;
  std::vector<double> mass;  // certified lower bound per order position
  int t = 0;
  std::vector<std::string> warnings;
};
AdaptivePinning adaptive_pinning(const Graph& g, const QSpinParams& m, const GrowthParams& gp,
                                 const std::vector<int>& order,
                                 const OracleCaps& caps = OracleCaps::from_env());

struct LatticeRunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  int ell_override = 0;
  std::int64_t sample_cap = 0;   // 0 = none; the theoretical target is huge
  std::int64_t wall_cap_ms = 0;  // 0 = none
};

struct LatticeCountResult {
  CountEstimate count;
  int pin_t = 0;
  int radius = 0;                       // recursion radius of the generic sampler
  std::vector<int> ell_prime;           // per elimination step
  std::vector<std::int64_t> table_rows;
  std::vector<double> mass;
  std::vector<std::string> warnings;
};

// Partition-function estimate for a q-spin system on a graph of polynomial
// growth: greedy pinning, telescoping conditional marginals estimated from
// boundary tables, copies trick, N = ceil(10 e^{4q^2}/eps0^2) averaged
// products (in practice reached only through sample_cap; the estimate is
// flagged truncated below the theoretical count).
LatticeCountResult fpras_lattice(const Graph& g, const QSpinParams& m, double eps,
                                 const GrowthParams& gp, const LatticeRunConfig& run = {},
                                 const OracleCaps& caps = OracleCaps::from_env());

}  // namespace subquad
