#include "subquad/lazy_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "subquad/errors.hpp"

namespace subquad {

namespace {

constexpr double kSlackFloor = 1e-12;  // below this the recursion branch is dead
constexpr std::int64_t kTauCap = std::int64_t{1} << 20;

}  // namespace

LazySampler::LazySampler(const Graph& g, const QSpinParams& m, int r, OracleCaps caps)
    : g_(&g), m_(m), r_(r), caps_(caps) {
  m_.validate();
  if (r_ < 1) throw ArgumentError("sampling radius must be at least 1");
  locals_.resize(static_cast<std::size_t>(g.vertex_count()));
}

const DistanceShell& LazySampler::local(int v) {
  auto& slot = locals_.at(static_cast<std::size_t>(v));
  if (!slot) slot = std::make_unique<DistanceShell>(ball(*g_, v, r_));
  return *slot;
}

std::string LazySampler::cache_key(int v, const PartialConfiguration& pin) {
  const DistanceShell& sh = local(v);
  std::string key(sizeof(int) + sh.vertices.size(), '\0');
  std::memcpy(key.data(), &v, sizeof(int));
  for (std::size_t i = 0; i < sh.vertices.size(); ++i) {
    const int u = sh.vertices[i];
    key[sizeof(int) + i] =
        pin.is_pinned(u) ? static_cast<char>(pin.spin(u) + 1) : '\0';
  }
  return key;
}

std::vector<double> LazySampler::ball_conditional(const PartialConfiguration& pin, int v) {
  return grid_marginal(*g_, m_, pin, v, local(v), caps_);
}

const LazySampler::Split& LazySampler::split_for(int v, PartialConfiguration& pin) {
  std::string key = cache_key(v, pin);
  if (auto it = split_cache_.find(key); it != split_cache_.end()) return it->second;

  const DistanceShell& sh = local(v);
  std::vector<int> free;
  for (int w : sh.sphere()) {
    if (!pin.is_pinned(w)) free.push_back(w);
  }
  const int q = m_.q;
  std::int64_t count = 1;
  for (std::size_t i = 0; i < free.size(); ++i) {
    count *= q;
    if (count > kTauCap) {
      throw OracleTooLarge("free sphere too large to enumerate boundary configurations");
    }
  }

  Split sp;
  sp.p.assign(static_cast<std::size_t>(q), 0.0);
  bool any_feasible = false;
  PartialConfiguration& work = pin;
  std::vector<int> digits(free.size(), 0);
  for (std::int64_t t = 0; t < count; ++t) {
    std::int64_t rem = t;
    for (std::size_t i = 0; i < free.size(); ++i) {
      digits[i] = static_cast<int>(rem % q);
      rem /= q;
    }
    for (std::size_t i = 0; i < free.size(); ++i) work.pin(free[i], digits[i]);
    bool feasible = true;
    std::vector<double> mu;
    try {
      mu = ball_conditional(work, v);
    } catch (const InfeasibleConditioning&) {
      feasible = false;
    } catch (...) {
      for (int w : free) work.unpin(w);
      throw;
    }
    for (int w : free) work.unpin(w);
    if (!feasible) continue;
    if (!any_feasible) {
      sp.p = mu;
      any_feasible = true;
    } else {
      for (int s = 0; s < q; ++s) sp.p[static_cast<std::size_t>(s)] = std::min(sp.p[static_cast<std::size_t>(s)], mu[static_cast<std::size_t>(s)]);
    }
  }
  if (!any_feasible) {
    throw InfeasibleConditioning("no boundary configuration on the sphere is feasible");
  }
  double mass = 0.0;
  for (double p : sp.p) mass += p;
  sp.p_rec = std::max(0.0, 1.0 - mass);

  return split_cache_.emplace(std::move(key), std::move(sp)).first->second;
}

const std::vector<double>& LazySampler::full_boundary_conditional(int v,
                                                                  const PartialConfiguration& pin) {
  std::string key = cache_key(v, pin);
  if (auto it = cond_cache_.find(key); it != cond_cache_.end()) return it->second;
  std::vector<double> mu = ball_conditional(pin, v);
  return cond_cache_.emplace(std::move(key), std::move(mu)).first->second;
}

int LazySampler::draw(PartialConfiguration& pin, int v, Budget& budget, RngStream& rng) {
  if (v < 0 || v >= g_->vertex_count()) throw ArgumentError("vertex out of range");
  if (pin.is_pinned(v)) throw ArgumentError("cannot sample a pinned vertex");
  budget.consume();

  const Split& sp = split_for(v, pin);
  const int q = m_.q;
  const double u = rng.next_double();

  const bool can_recurse = sp.p_rec >= kSlackFloor;
  if (!can_recurse || u >= sp.p_rec) {
    // Direct emission: walk the cumulative worst-case probabilities. When the
    // slack is numerically dead we renormalize instead of offsetting.
    double offset = can_recurse ? sp.p_rec : 0.0;
    double scale = 1.0;
    if (!can_recurse) {
      double mass = 0.0;
      for (double p : sp.p) mass += p;
      if (!(mass > 0.0)) throw InternalError("split distribution has no mass");
      scale = 1.0 / mass;
    }
    double acc = offset;
    int chosen = -1;
    for (int s = 0; s < q; ++s) {
      acc += sp.p[static_cast<std::size_t>(s)] * scale;
      if (u < acc) {
        chosen = s;
        break;
      }
    }
    if (chosen < 0) {
      for (int s = q - 1; s >= 0; --s) {
        if (sp.p[static_cast<std::size_t>(s)] > 0.0) {
          chosen = s;
          break;
        }
      }
    }
    if (chosen < 0) throw InternalError("split distribution has no mass");
    pin.pin(v, chosen);
    ++direct_draws_;
    return chosen;
  }

  // Recursion branch: sample the whole free sphere, then draw from the
  // correction between the now-fully-conditioned marginal and the worst case.
  const DistanceShell& sh = local(v);
  std::vector<int> extended;
  int chosen = -1;
  try {
    for (int w : sh.sphere()) {
      if (pin.is_pinned(w)) continue;
      draw(pin, w, budget, rng);
      extended.push_back(w);
    }
    const std::vector<double>& mu = full_boundary_conditional(v, pin);
    std::vector<double> rho(static_cast<std::size_t>(q), 0.0);
    double sum = 0.0;
    for (int s = 0; s < q; ++s) {
      double r = (mu[static_cast<std::size_t>(s)] - sp.p[static_cast<std::size_t>(s)]) / sp.p_rec;
      if (r < -1e-9) {
        throw InternalError("correction distribution has a negative entry");
      }
      if (r < 0.0) r = 0.0;
      rho[static_cast<std::size_t>(s)] = r;
      sum += r;
    }
    if (!(sum > 0.0) || std::abs(sum - 1.0) > 1e-6) {
      throw InternalError("correction distribution does not normalize");
    }
    const double u2 = rng.next_double() * sum;
    double acc = 0.0;
    for (int s = 0; s < q; ++s) {
      acc += rho[static_cast<std::size_t>(s)];
      if (u2 < acc) {
        chosen = s;
        break;
      }
    }
    if (chosen < 0) {
      for (int s = q - 1; s >= 0; --s) {
        if (rho[static_cast<std::size_t>(s)] > 0.0) {
          chosen = s;
          break;
        }
      }
    }
    if (chosen < 0) throw InternalError("correction distribution has no mass");
  } catch (...) {
    for (auto it = extended.rbegin(); it != extended.rend(); ++it) pin.unpin(*it);
    throw;
  }
  for (auto it = extended.rbegin(); it != extended.rend(); ++it) pin.unpin(*it);
  pin.pin(v, chosen);
  ++recursive_draws_;
  return chosen;
}

int lazy_sample(const Graph& g, const QSpinParams& m, PartialConfiguration& pin, int v, int r,
                Budget& budget, RngStream& rng, OracleCaps caps) {
  LazySampler sampler(g, m, r, caps);
  return sampler.draw(pin, v, budget, rng);
}

}  // namespace subquad
