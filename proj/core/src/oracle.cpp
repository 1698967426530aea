#include "subquad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace subquad {

OracleCaps OracleCaps::from_env() {
  OracleCaps caps;
  if (const char* s = std::getenv("SUBQUAD_ORACLE_FREE_CAP")) caps.free_vertex_cap = std::atoi(s);
  if (const char* s = std::getenv("SUBQUAD_GRID_WIDTH_CAP")) caps.frontier_cap = std::atoi(s);
  if (caps.free_vertex_cap < 0 || caps.frontier_cap < 0)
    throw ArgumentError("oracle caps must be nonnegative");
  return caps;
}

LogWeight config_weight(const Graph& g, const QSpinParams& m, const PartialConfiguration& full) {
  if (full.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  if (full.pinned_count() != g.vertex_count())
    throw ArgumentError("config_weight needs a fully pinned configuration");
  LogWeight w = LogWeight::one();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int s = full.spin(v);
    if (s >= m.q) throw ArgumentError("spin exceeds q at vertex " + std::to_string(v));
    w *= LogWeight::from_value(m.field(s));
    for (int u : g.neighbors(v))
      if (u > v) w *= LogWeight::from_value(m.a(s, full.spin(u)));
    if (w.is_zero()) return LogWeight::zero();
  }
  return w;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared state for the pruned depth-first enumeration over free vertices.
struct Enumerator {
  const Graph& g;
  const QSpinParams& m;
  PartialConfiguration& pin;  // mutated in place, restored before returning
  std::vector<int> free;      // ascending ids
  std::vector<double> log_b;
  std::vector<double> log_a;
  LogSumAccumulator total;

  Enumerator(const Graph& g_, const QSpinParams& m_, PartialConfiguration& pin_)
      : g(g_), m(m_), pin(pin_) {
    log_b.reserve(static_cast<std::size_t>(m.q));
    for (int s = 0; s < m.q; ++s) log_b.push_back(std::log(m.field(s)));
    log_a.reserve(m.A.size());
    for (double a : m.A) log_a.push_back(a > 0.0 ? std::log(a) : kNegInf);
  }

  // Field factor for (v, s) plus interactions toward already-pinned
  // neighbors; -inf when any factor vanishes.
  double local_term(int v, int s) {
    double t = log_b[static_cast<std::size_t>(s)];
    for (int u : g.neighbors(v)) {
      if (!pin.is_pinned(u)) continue;
      const double a = log_a[static_cast<std::size_t>(s * m.q + pin.spin(u))];
      if (a == kNegInf) return kNegInf;
      t += a;
    }
    return t;
  }

  void run(std::size_t depth, double acc) {
    if (depth == free.size()) {
      total.add(acc);
      return;
    }
    const int v = free[depth];
    for (int s = 0; s < m.q; ++s) {
      const double t = local_term(v, s);
      if (t == kNegInf) continue;
      pin.pin(v, s);
      run(depth + 1, acc + t);
      pin.unpin(v);
    }
  }
};

double enumerate_log_partition(const Graph& g, const QSpinParams& m, PartialConfiguration& pin,
                               const OracleCaps& caps) {
  if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  m.validate();
  Enumerator e(g, m, pin);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!pin.is_pinned(v)) e.free.push_back(v);
  if (static_cast<int>(e.free.size()) > caps.free_vertex_cap)
    throw OracleTooLarge("exact enumeration over " + std::to_string(e.free.size()) +
                         " free vertices exceeds cap " + std::to_string(caps.free_vertex_cap));
  // Base weight of the pinned part (fields, and edges with both ends pinned).
  double base = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!pin.is_pinned(v)) continue;
    const int s = pin.spin(v);
    if (s >= m.q) throw ArgumentError("pinned spin exceeds q");
    base += e.log_b[static_cast<std::size_t>(s)];
    for (int u : g.neighbors(v)) {
      if (u > v && pin.is_pinned(u)) {
        const double a = e.log_a[static_cast<std::size_t>(s * m.q + pin.spin(u))];
        if (a == kNegInf) return kNegInf;
        base += a;
      }
    }
  }
  e.run(0, base);
  return e.total.log_sum();
}

}  // namespace

double exact_log_partition(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin,
                           const OracleCaps& caps) {
  PartialConfiguration work = pin;
  return enumerate_log_partition(g, m, work, caps);
}

std::vector<double> exact_marginal(const Graph& g, const QSpinParams& m,
                                   const PartialConfiguration& pin, int v,
                                   const OracleCaps& caps) {
  if (v < 0 || v >= g.vertex_count()) throw ArgumentError("vertex id out of range");
  if (pin.is_pinned(v)) throw ArgumentError("marginal requested for a pinned vertex");
  PartialConfiguration work = pin;
  std::vector<double> log_z(static_cast<std::size_t>(m.q), kNegInf);
  LogSumAccumulator norm;
  for (int s = 0; s < m.q; ++s) {
    work.pin(v, s);
    log_z[static_cast<std::size_t>(s)] = enumerate_log_partition(g, m, work, caps);
    norm.add(log_z[static_cast<std::size_t>(s)]);
    work.unpin(v);
  }
  const double z = norm.log_sum();
  if (z == kNegInf)
    throw InfeasibleConditioning("no positive-weight extension at vertex " + std::to_string(v));
  std::vector<double> mu(static_cast<std::size_t>(m.q), 0.0);
  for (int s = 0; s < m.q; ++s)
    mu[static_cast<std::size_t>(s)] = std::exp(log_z[static_cast<std::size_t>(s)] - z);
  return mu;
}

RatioFactor child_factor(const TwoSpinParams& m, Ratio child) {
  if (child.infinite) return {m.gamma, false};
  const double num = m.gamma * child.value + 1.0;
  const double den = child.value + m.beta;
  if (den == 0.0) {
    if (num == 0.0) throw InfeasibleConditioning("indeterminate ratio factor");
    return {0.0, true};
  }
  return {num / den, false};
}

namespace {

// Combine child factors: zero and infinite factors may not meet.
}  // namespace

Ratio combine_ratio(const TwoSpinParams& m, const std::vector<RatioFactor>& factors) {
  bool has_zero = false, has_inf = false;
  double prod = m.lambda;
  for (const auto& f : factors) {
    if (f.infinite)
      has_inf = true;
    else if (f.value == 0.0)
      has_zero = true;
    else
      prod *= f.value;
  }
  if (has_inf && has_zero)
    throw InfeasibleConditioning("contradictory pinning around a tree vertex");
  if (has_inf) return Ratio::inf();
  if (has_zero) return Ratio::finite(0.0);
  return Ratio::finite(prod);
}

Ratio tree_ratio(const Graph& g, const TwoSpinParams& m, const PartialConfiguration& pin,
                 int root) {
  m.validate();
  if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  (void)g.neighbors(root);
  if (pin.is_pinned(root)) return pin.spin(root) == 1 ? Ratio::inf() : Ratio::finite(0.0);

  // The component of root must be a tree; verify while collecting it.
  {
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<int> stack{root};
    seen[static_cast<std::size_t>(root)] = 1;
    int nv = 0, deg_sum = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++nv;
      deg_sum += g.degree(u);
      for (int w : g.neighbors(u))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
    }
    if (deg_sum != 2 * (nv - 1))
      throw ArgumentError("ratio recursion requires a tree component at the root");
  }

  // Iterative post-order; pinned vertices terminate their branch.
  struct Frame {
    int v;
    int parent;
    std::size_t next_child = 0;
    std::vector<RatioFactor> factors;
  };
  std::vector<Frame> stack;
  stack.push_back({root, -1});
  Ratio result;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto nbrs = g.neighbors(f.v);
    bool descended = false;
    while (f.next_child < nbrs.size()) {
      const int c = nbrs[f.next_child++];
      if (c == f.parent) continue;
      if (pin.is_pinned(c)) {
        f.factors.push_back(
            child_factor(m, pin.spin(c) == 1 ? Ratio::inf() : Ratio::finite(0.0)));
        continue;
      }
      stack.push_back({c, f.v});
      descended = true;
      break;
    }
    if (descended) continue;
    Ratio r = combine_ratio(m, f.factors);
    const int parent = f.parent;
    stack.pop_back();
    if (parent < 0) {
      result = r;
    } else {
      stack.back().factors.push_back(child_factor(m, r));
    }
  }
  return result;
}

}  // namespace subquad
