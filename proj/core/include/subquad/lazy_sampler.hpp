// Generic recursive marginal sampler for q-spin systems. A draw at v either
// emits a spin directly, with per-spin probability equal to the worst-case
// conditional marginal over all boundary configurations on the distance-r
// sphere, or (with the leftover probability) recursively samples the whole
// free sphere and draws from the correction distribution. The worst-case
// split depends only on the pinning inside the ball, so it is cached and
// shared across draws.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "subquad/graph.hpp"
#include "subquad/oracle.hpp"
#include "subquad/rng.hpp"
#include "subquad/sampler.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

class LazySampler {
 public:
  LazySampler(const Graph& g, const QSpinParams& m, int r,
              OracleCaps caps = OracleCaps::from_env());

  // Draw the spin of unpinned v given pin, leaving v pinned to the result and
  // every other vertex as on entry (also on BudgetExhausted, which restores
  // the pinning fully before propagating).
  int draw(PartialConfiguration& pin, int v, Budget& budget, RngStream& rng);

  int radius() const { return r_; }
  const QSpinParams& model() const { return m_; }
  std::size_t cached_splits() const { return split_cache_.size(); }
  std::int64_t direct_draws() const { return direct_draws_; }
  std::int64_t recursive_draws() const { return recursive_draws_; }

 private:
  // Worst-case direct-emission probabilities and the recursion slack.
  struct Split {
    double p_rec = 0.0;
    std::vector<double> p;
  };

  const DistanceShell& local(int v);
  std::string cache_key(int v, const PartialConfiguration& pin);
  std::vector<double> ball_conditional(const PartialConfiguration& pin, int v);
  const Split& split_for(int v, PartialConfiguration& pin);
  const std::vector<double>& full_boundary_conditional(int v, const PartialConfiguration& pin);

  const Graph* g_;
  QSpinParams m_;
  int r_;
  OracleCaps caps_;
  std::vector<std::unique_ptr<DistanceShell>> locals_;
  std::unordered_map<std::string, Split> split_cache_;
  std::unordered_map<std::string, std::vector<double>> cond_cache_;
  std::int64_t direct_draws_ = 0;
  std::int64_t recursive_draws_ = 0;
};

// One-shot convenience wrapper (no cache reuse across calls).
int lazy_sample(const Graph& g, const QSpinParams& m, PartialConfiguration& pin, int v, int r,
                Budget& budget, RngStream& rng, OracleCaps caps = OracleCaps::from_env());

}  // namespace subquad
