#include "subquad/sampler.hpp"

#include <cmath>

namespace subquad {

std::int64_t budget_for(int delta, double lambda, double eps) {
  if (delta < 1) throw ArgumentError("degree bound must be at least 1");
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) throw ArgumentError("failure probability must be in (0, 1)");
  if (delta > 1 && !(lambda < 1.0 / (delta - 1)))
    throw OutOfRegime("step-budget bound needs lambda < 1/(delta-1), got lambda=" +
                      std::to_string(lambda) + " at delta=" + std::to_string(delta));
  const double drift = lambda / (1.0 + lambda) * delta - 1.0;  // negative in regime
  const double t = 2.0 * delta * delta / (drift * drift) * std::log(1.0 / eps);
  return static_cast<std::int64_t>(std::ceil(t));
}

BranchingParams BranchingParams::hardcore(int delta, double lambda) {
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  BranchingParams bp;
  bp.delta = delta;
  bp.p = lambda / (1.0 + lambda);
  bp.validate();
  return bp;
}

void BranchingParams::validate() const {
  if (delta < 1) throw ArgumentError("degree bound must be at least 1");
  if (!(p > 0.0) || !(p < 1.0)) throw ArgumentError("branching probability must be in (0, 1)");
}

double branching_tail(const BranchingParams& bp, std::int64_t steps, int trials, RngStream& rng) {
  bp.validate();
  if (steps < 0) throw ArgumentError("negative step count");
  if (trials < 1) throw ArgumentError("need at least one trial");
  int alive = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::int64_t x = 1;
    for (std::int64_t t = 0; t < steps && x > 0; ++t)
      x += rng.bernoulli(bp.p) ? bp.delta - 1 : -1;
    if (x > 0) ++alive;
  }
  return static_cast<double>(alive) / trials;
}

bool SawSamplingView::is_pinned(int id) const {
  if (t_->node(id).forced >= 0) return true;
  return static_cast<std::size_t>(id) < spins_.size() && spins_[static_cast<std::size_t>(id)] >= 0;
}

int SawSamplingView::spin(int id) const {
  const SawNode& n = t_->node(id);
  if (n.forced >= 0) return n.forced;
  if (static_cast<std::size_t>(id) < spins_.size() && spins_[static_cast<std::size_t>(id)] >= 0)
    return spins_[static_cast<std::size_t>(id)];
  throw ArgumentError("node is not pinned");
}

void SawSamplingView::set_spin(int id, int s) {
  if (is_pinned(id)) throw ArgumentError("node already pinned");
  if (s != 0 && s != 1) throw ArgumentError("spin out of range");
  if (spins_.size() < static_cast<std::size_t>(t_->size())) spins_.resize(t_->size(), -1);
  spins_[static_cast<std::size_t>(id)] = static_cast<std::int8_t>(s);
}

void SawSamplingView::clear_spin(int id) {
  if (t_->node(id).forced >= 0) throw ArgumentError("cannot clear a cycle-forced node");
  if (static_cast<std::size_t>(id) >= spins_.size() || spins_[static_cast<std::size_t>(id)] < 0)
    throw ArgumentError("node is not pinned");
  spins_[static_cast<std::size_t>(id)] = -1;
}

void SawSamplingView::append_neighbors(int id, std::vector<int>& out) {
  if (t_->expandable(id)) t_->expand_node(id);
  const SawNode& n = t_->node(id);
  if (n.parent >= 0) out.push_back(n.parent);
  for (int c = 0; c < n.child_count; ++c) out.push_back(n.child_begin + c);
}

}  // namespace subquad
