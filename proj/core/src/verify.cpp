#include "subquad/verify.hpp"

#include <algorithm>
#include <cmath>

#include "subquad/errors.hpp"
#include "subquad/rng.hpp"

namespace subquad {

LowerBoundReport weitz_lower_bound(int delta, int k, int ell_max) {
  if (delta < 2) throw OutOfRegime("branching requires degree at least 2");
  if (k < 1) throw ArgumentError("exponent must be at least 1");
  if (std::pow(static_cast<double>(delta), static_cast<double>(k)) < 4.0) {
    throw OutOfRegime("the bound needs Delta^k >= 4");
  }
  if (ell_max < 2) throw OutOfRegime("boundary depth must be at least 2");

  LowerBoundReport rep;
  rep.delta = delta;
  rep.k = k;
  rep.lambda = 2.0 / ((delta - 1) * std::pow(static_cast<double>(delta), static_cast<double>(k)));
  const double lam = rep.lambda;
  // Level next to the boundary: children all pinned empty give ratio lambda,
  // children all pinned occupied force the parent empty.
  const double r0_base = lam;
  const double r1_base = 0.0;
  rep.base_gap = std::abs(r0_base - r1_base);

  const auto inner = [&](double x) { return lam / std::pow(1.0 + x, delta - 1); };
  for (int ell = 2; ell <= ell_max; ++ell) {
    double r0 = r0_base;
    double r1 = r1_base;
    for (int level = ell - 2; level >= 1; --level) {
      r0 = inner(r0);
      r1 = inner(r1);
    }
    const double g0 = lam / std::pow(1.0 + r0, delta);  // root has Delta subtrees
    const double g1 = lam / std::pow(1.0 + r1, delta);
    const double mu0 = g0 / (1.0 + g0);
    const double mu1 = g1 / (1.0 + g1);
    LowerBoundRow row;
    row.ell = ell;
    row.d_tv = std::abs(mu0 - mu1);
    row.bound = 0.5 * std::pow(static_cast<double>(delta), -static_cast<double>(k) * ell);
    row.pass = row.d_tv >= row.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

constexpr double kDecayFloor = 1e-12;
constexpr std::int64_t kPairRowCap = 4096;

// All feasible conditional distributions of v over configurations of the
// distance-ell sphere.
std::vector<std::vector<double>> sphere_conditionals(const Graph& g, const QSpinParams& m, int v,
                                                     int ell, const OracleCaps& caps) {
  const DistanceShell shell = ball(g, v, ell);
  const std::vector<int> boundary(shell.sphere().begin(), shell.sphere().end());
  std::int64_t rows = 1;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    rows *= m.q;
    if (rows > (std::int64_t{1} << 20)) {
      throw OracleTooLarge("sphere too large to enumerate boundary configurations");
    }
  }
  if (m.q > 2 && rows > kPairRowCap) {
    throw OracleTooLarge("too many boundary configurations for pairwise comparison");
  }

  std::vector<std::vector<double>> out;
  PartialConfiguration pin(g.vertex_count());
  std::vector<int> digits(boundary.size(), 0);
  for (std::int64_t idx = 0; idx < rows; ++idx) {
    std::int64_t rem = idx;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      digits[i] = static_cast<int>(rem % m.q);
      rem /= m.q;
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) pin.pin(boundary[i], digits[i]);
    try {
      out.push_back(grid_marginal(g, m, pin, v, shell, caps));
    } catch (const InfeasibleConditioning&) {
    } catch (...) {
      for (int w : boundary) pin.unpin(w);
      throw;
    }
    for (int w : boundary) pin.unpin(w);
  }
  return out;
}

}  // namespace

DecayFit ssm_decay_fit(const Graph& g, const QSpinParams& m, int v, int ell_max,
                       const OracleCaps& caps) {
  m.validate();
  if (v < 0 || v >= g.vertex_count()) throw ArgumentError("vertex id out of range");
  if (ell_max < 1) throw ArgumentError("need at least one distance");

  DecayFit fit;
  for (int ell = 1; ell <= ell_max; ++ell) {
    const auto dists = sphere_conditionals(g, m, v, ell, caps);
    double worst = 0.0;
    if (m.q == 2) {
      // TV distance between two-point distributions is the gap in mu(1).
      double lo = 2.0;
      double hi = -1.0;
      for (const auto& mu : dists) {
        lo = std::min(lo, mu[1]);
        hi = std::max(hi, mu[1]);
      }
      if (hi >= lo) worst = hi - lo;
    } else {
      for (std::size_t a = 0; a < dists.size(); ++a) {
        for (std::size_t b = a + 1; b < dists.size(); ++b) {
          double tv = 0.0;
          for (int s = 0; s < m.q; ++s) {
            tv += std::abs(dists[a][static_cast<std::size_t>(s)] -
                           dists[b][static_cast<std::size_t>(s)]);
          }
          worst = std::max(worst, 0.5 * tv);
        }
      }
    }
    fit.curve.push_back(worst);
    fit.used.push_back(worst >= kDecayFloor ? 1 : 0);
  }

  // Least squares on log D(ell) = log C - ell * log r over the usable points.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int pts = 0;
  for (int ell = 1; ell <= ell_max; ++ell) {
    if (!fit.used[static_cast<std::size_t>(ell - 1)]) continue;
    const double x = ell;
    const double y = std::log(fit.curve[static_cast<std::size_t>(ell - 1)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++pts;
  }
  if (pts >= 2) {
    const double denom = pts * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (pts * sxy - sx * sy) / denom;
      const double intercept = (sy - slope * sx) / pts;
      fit.r = std::exp(-slope);
      fit.C = std::exp(intercept);
      fit.fitted = true;
    }
  }
  return fit;
}

GrowthProfile growth_profile(const Graph& g, int d) {
  if (d < 1) throw ArgumentError("growth dimension must be at least 1");
  const int n = g.vertex_count();
  GrowthProfile profile;
  if (n == 0) return profile;

  // Strided samples alias with grid embeddings, so large graphs get a
  // deterministic pseudo-random vertex sample instead.
  std::vector<int> probes;
  if (n <= 4096) {
    probes.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) probes[static_cast<std::size_t>(v)] = v;
  } else {
    profile.sampled = true;
    RngStream picks = RngStream::derive(g.digest(), "growth-probe");
    for (int i = 0; i < 256; ++i) probes.push_back(static_cast<int>(picks.next_below(n)));
  }
  for (int v : probes) {
    const DistanceShell shell = ball(g, v, n);  // full eccentricity reach
    const int max_dist = shell.distance.empty() ? 0 : shell.distance.back();
    std::size_t idx = 0;
    std::int64_t count = 0;
    for (int ell = 1; ell <= std::max(1, max_dist); ++ell) {
      while (idx < shell.vertices.size() && shell.distance[idx] <= ell) {
        ++count;
        ++idx;
      }
      const double ratio =
          static_cast<double>(count) / std::pow(static_cast<double>(ell), static_cast<double>(d));
      if (ratio > profile.c0) {
        profile.c0 = ratio;
        profile.argmax_vertex = v;
        profile.argmax_ell = ell;
      }
    }
  }
  return profile;
}

}  // namespace subquad
