// Scaling experiments over graph families with deterministic logical step
// counters, so the qualitative runtime separations can be checked in CI
// without trusting wall clocks. Wall time is recorded informationally.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subquad {

struct BenchRow {
  std::string tag;
  int n = 0;
  double eps = 0.0;
  double wall_ms = 0.0;       // informational only
  std::int64_t steps = 0;     // deterministic under a fixed seed
  double estimate = 0.0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string note;
};

// Least squares of log(steps) against log(n) over the ok rows.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double stderr_ = 0.0;  // standard error of the slope
  int points = 0;
};

SlopeFit fit_loglog(const std::vector<BenchRow>& rows);

// Header plus one line per row; columns are exactly the BenchRow fields.
std::string rows_to_csv(const std::vector<BenchRow>& rows);

struct ScalingReport {
  std::string family;
  std::string algorithm;
  std::vector<BenchRow> rows;
  SlopeFit fit;
};

// family "random4": connected random graphs with maximum degree 4 at fugacity
// 1/12; per size, marginal-estimation cost over a deterministic sample of up
// to 256 vertices, scaled back to all n vertices. Algorithms:
//   "fast-hardcore"  — sampled-boundary estimator at its own truncation
//                      depth; steps = sampler steps + walk-tree nodes.
//   "weitz-baseline" — full walk-tree evaluation deep enough for an additive
//                      eps/(2n) marginal target; steps = tree nodes.
// family "grid": near-square grids, hard-core fugacity 0.2, one telescoping
// counting pass with algorithm "lattice"; steps = sampler steps + table
// lookups. Per-row failures are recorded in the row, not thrown.
ScalingReport scaling_run(const std::string& family, const std::string& algorithm,
                          const std::vector<int>& sizes, double eps, std::uint64_t seed);

}  // namespace subquad
