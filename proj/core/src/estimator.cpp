#include "subquad/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "subquad/errors.hpp"
#include "subquad/rng.hpp"
#include "subquad/sampler.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

namespace {

constexpr int kMaxAttempts = 16;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RegimeReport check_regime(int delta, double lambda, int k) {
  RegimeReport rep;
  rep.delta = delta;
  rep.lambda = lambda;
  rep.k = k;
  if (delta < 1 || !(lambda > 0.0) || k < 1) {
    rep.warnings.push_back("degenerate parameters; no regime applies");
    return rep;
  }
  const double decay_bound = 1.0 / (std::pow(delta, k) * std::max(1, delta - 1));
  rep.estimator_regime = lambda < decay_bound;
  rep.sampler_regime = delta == 1 || lambda < 1.0 / (delta - 1);
  rep.lambda_uniqueness =
      delta <= 2 ? std::numeric_limits<double>::infinity()
                 : std::pow(delta - 1, delta - 1) / std::pow(delta - 2, delta);
  if (!rep.estimator_regime) {
    rep.warnings.push_back(
        "fugacity is not below 1/(Delta^k (Delta-1)); the variance and truncation "
        "guarantees of the estimator do not apply");
  }
  if (!rep.sampler_regime) {
    rep.warnings.push_back(
        "fugacity is not below 1/(Delta-1); the recursive sampler's step budget diverges");
  }
  if (lambda >= rep.lambda_uniqueness) {
    rep.warnings.push_back("fugacity is at or above the tree uniqueness threshold");
  }
  return rep;
}

int truncation_depth(int n, int delta, int k, double C) {
  if (n < 1) throw ArgumentError("graph must be nonempty");
  if (k < 1) throw ArgumentError("decay exponent must be at least 1");
  if (!(C > 0.0)) throw ArgumentError("decay constant must be positive");
  if (delta < 2) return 1;  // the walk tree is a path; depth barely matters
  const double raw = (0.5 * std::log(static_cast<double>(n)) - std::log(C)) /
                     (k * std::log(static_cast<double>(delta)));
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

MarginalEstimate estimate_marginal_zero(const Graph& g, double lambda, int v,
                                        const HardcoreEstimatorConfig& cfg,
                                        std::uint64_t stream_seed) {
  return estimate_marginal_zero(g, std::vector<char>{}, lambda, v, cfg, stream_seed);
}

MarginalEstimate estimate_marginal_zero(const Graph& g, const std::vector<char>& removed,
                                        double lambda, int v, const HardcoreEstimatorConfig& cfg,
                                        std::uint64_t stream_seed) {
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  if (!(cfg.fail > 0.0) || cfg.fail >= 1.0) {
    throw ArgumentError("failure budget must lie in (0, 1)");
  }
  if (v < 0 || v >= g.vertex_count()) throw ArgumentError("vertex id out of range");
  int n_rem = g.vertex_count();
  if (!removed.empty()) {
    if (removed.size() != static_cast<std::size_t>(g.vertex_count())) {
      throw ArgumentError("removed-vertex mask size mismatch");
    }
    if (removed[static_cast<std::size_t>(v)]) throw ArgumentError("vertex is removed");
    n_rem = 0;
    for (char r : removed) n_rem += r ? 0 : 1;
  }

  const int delta = cfg.delta > 0 ? cfg.delta : std::max(1, g.max_degree());
  const int ell =
      cfg.ell_override > 0 ? cfg.ell_override : truncation_depth(n_rem, delta, cfg.k, cfg.C);

  SawTree tree(g, v, removed);
  tree.expand_to_depth(ell);
  const std::vector<int> frontier = tree.frontier_at(ell);

  MarginalEstimate out;
  out.ell = ell;
  out.boundary_size = static_cast<int>(frontier.size());

  SawSamplingView view(tree);
  if (!frontier.empty()) {
    const double per_node = cfg.fail / (8.0 * static_cast<double>(frontier.size()));
    const std::int64_t cap = budget_for(delta, lambda, per_node);
    for (int node : frontier) {
      bool done = false;
      for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
        RngStream rng = RngStream::derive(
            stream_seed, "boundary",
            static_cast<std::uint64_t>(node) * kMaxAttempts + static_cast<std::uint64_t>(attempt));
        Budget budget(cap);
        try {
          hardcore_sample(view, lambda, node, budget, rng);
          done = true;
        } catch (const BudgetExhausted&) {
          ++out.retries;
        }
        out.steps_consumed += budget.consumed;
      }
      if (!done) {
        throw SamplerStuck("a boundary vertex kept exhausting its step budget");
      }
    }
  }

  PartialConfiguration boundary(tree.size());
  for (int node : frontier) boundary.pin(node, view.spin(node));
  out.tree_nodes = tree.size();
  out.value = saw_marginal_zero(tree, hardcore(lambda), boundary);
  return out;
}

MarginalInterval weitz_baseline(const Graph& g, double lambda, int v, int ell) {
  if (ell < 1) throw ArgumentError("truncation depth must be at least 1");
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  return weitz_baseline(g, hardcore(lambda), v, ell);
}

CountEstimate fpras_hardcore(const Graph& g, double lambda, double eps,
                             const HardcoreEstimatorConfig& cfg) {
  if (!(lambda > 0.0)) throw ArgumentError("fugacity must be positive");
  if (!(eps > 0.0) || eps >= 1.0) throw ArgumentError("relative accuracy must lie in (0, 1)");
  if (g.vertex_count() < 1) throw ArgumentError("graph must be nonempty");

  const auto t0 = std::chrono::steady_clock::now();
  const int t_copies = static_cast<int>(std::ceil(2.0 / eps));
  const double eps0 = (1.0 - std::exp(-1.0)) / 2.0;
  const double want = std::ceil(8.0 * std::exp((1.0 + lambda) * (1.0 + lambda)) / (eps0 * eps0));
  if (!(want < 1e15)) throw ArgumentError("sample size overflows; lower the fugacity");
  const std::int64_t n_target = static_cast<std::int64_t>(want);

  const int n = g.vertex_count();
  const std::int64_t n_union64 = static_cast<std::int64_t>(n) * t_copies;
  if (n_union64 > (std::int64_t{1} << 26)) {
    throw ArgumentError("accuracy target needs more disjoint copies than fit in memory");
  }
  const int n_union = static_cast<int>(n_union64);
  const std::vector<Edge> base_edges = g.edges();
  std::vector<Edge> union_edges;
  union_edges.reserve(base_edges.size() * static_cast<std::size_t>(t_copies));
  for (int c = 0; c < t_copies; ++c) {
    const int off = c * n;
    for (const auto& [a, b] : base_edges) union_edges.emplace_back(a + off, b + off);
  }
  const Graph gu = Graph::from_edges(n_union, union_edges);

  CountEstimate out;
  out.eps = eps;
  out.copies = t_copies;
  out.seed = cfg.seed;
  out.delta = cfg.delta > 0 ? cfg.delta : std::max(1, gu.max_degree());
  out.per_call_failure = 1.0 / (static_cast<double>(n_union) * static_cast<double>(n_target));
  out.ell = cfg.ell_override > 0 ? cfg.ell_override
                                 : truncation_depth(n_union, out.delta, cfg.k, cfg.C);

  HardcoreEstimatorConfig sub = cfg;
  sub.delta = out.delta;
  sub.fail = out.per_call_failure;

  std::int64_t target = n_target;
  if (cfg.sample_cap > 0 && target > cfg.sample_cap) {
    target = cfg.sample_cap;
    out.truncated = true;
  }

  LogSumAccumulator acc;
  std::vector<char> removed(static_cast<std::size_t>(n_union), 0);
  std::int64_t done = 0;
  for (std::int64_t s = 0; s < target; ++s) {
    if (cfg.wall_cap_ms > 0 && done > 0 && elapsed_ms(t0) > static_cast<double>(cfg.wall_cap_ms)) {
      out.truncated = true;
      break;
    }
    std::fill(removed.begin(), removed.end(), 0);
    double log_x = 0.0;
    for (int v = 0; v < n_union; ++v) {
      const std::uint64_t call = static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(n_union) +
                                 static_cast<std::uint64_t>(v);
      const std::uint64_t child_seed = RngStream::derive(cfg.seed, "count-call", call).next_u64();
      const MarginalEstimate est =
          estimate_marginal_zero(gu, removed, lambda, v, sub, child_seed);
      if (!(est.value > 0.0)) throw InternalError("telescoping factor vanished");
      log_x += std::log(est.value);
      removed[static_cast<std::size_t>(v)] = 1;
    }
    acc.add(log_x);
    ++done;
  }
  if (done == 0) throw InternalError("no telescoping samples were drawn");
  out.samples = done;
  const double log_mean = acc.log_sum() - std::log(static_cast<double>(done));
  out.log_z = -log_mean / t_copies;
  out.wall_ms = elapsed_ms(t0);
  return out;
}

}  // namespace subquad
