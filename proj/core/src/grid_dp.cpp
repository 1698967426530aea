// Sweep DP over an embedded window: cells are processed in (x, y) order and
// the state space is the spin assignment of the "alive" cells, those already
// assigned but still adjacent to unassigned ones. On grid windows the alive
// set stays within one column pair, so its size plays the role of the sweep
// width.
#include <algorithm>
#include <cmath>
#include <limits>

#include "subquad/oracle.hpp"

namespace subquad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CellPlan {
  int vertex = -1;
  int pinned_spin = -1;               // -1 when free
  std::vector<double> local;          // per-spin log field + external-pin factors
  std::vector<int> earlier_cells;     // earlier-neighbor cell indices
  std::vector<std::size_t> earlier;   // their alive-list positions at this step
  std::vector<std::size_t> retirees;  // alive-list positions to drop, descending
};

}  // namespace

double window_log_partition(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin,
                            std::span<const int> cells, const OracleCaps& caps) {
  m.validate();
  if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  if (cells.empty()) return 0.0;
  if (!g.has_coords()) throw ArgumentError("window partition needs an embedded graph");

  std::vector<int> cell_of(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> order(cells.begin(), cells.end());
  std::sort(order.begin(), order.end(), [&g](int a, int b) { return g.coord(a) < g.coord(b); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (cell_of[static_cast<std::size_t>(order[i])] >= 0)
      throw ArgumentError("duplicate cell in window");
    cell_of[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }

  std::vector<double> log_b(static_cast<std::size_t>(m.q));
  for (int s = 0; s < m.q; ++s) log_b[static_cast<std::size_t>(s)] = std::log(m.field(s));
  auto log_a = [&m](int s, int t) {
    const double a = m.a(s, t);
    return a > 0.0 ? std::log(a) : kNegInf;
  };

  std::vector<CellPlan> plan(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    CellPlan& p = plan[i];
    p.vertex = order[i];
    p.pinned_spin = pin.is_pinned(p.vertex) ? pin.spin(p.vertex) : -1;
    if (p.pinned_spin >= m.q) throw ArgumentError("pinned spin exceeds q");
    p.local = log_b;
    for (int u : g.neighbors(p.vertex)) {
      const int j = cell_of[static_cast<std::size_t>(u)];
      if (j >= 0) {
        if (j < static_cast<int>(i)) p.earlier_cells.push_back(j);
      } else if (pin.is_pinned(u)) {
        for (int s = 0; s < m.q; ++s)
          p.local[static_cast<std::size_t>(s)] += log_a(s, pin.spin(u));
      } else if (p.pinned_spin < 0) {
        throw ArgumentError("unpinned cell " + std::to_string(p.vertex) +
                            " has an unpinned neighbor outside the window");
      }
    }
  }

  // left[j] = unassigned cell-neighbors of j; a cell retires from the alive
  // list once it reaches zero. The schedule is state-independent, so compute
  // it once up front and record positions for the DP to replay.
  std::size_t max_alive = 0;
  {
    std::vector<int> left(order.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int j : plan[i].earlier_cells) ++left[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < order.size(); ++i)
      left[static_cast<std::size_t>(i)] += static_cast<int>(plan[i].earlier_cells.size());
    // left now counts all cell-neighbors; assigned ones get subtracted below.

    std::vector<int> alive;
    for (std::size_t i = 0; i < order.size(); ++i) {
      CellPlan& p = plan[i];
      for (int j : p.earlier_cells) {
        auto it = std::find(alive.begin(), alive.end(), j);
        if (it == alive.end()) throw InternalError("earlier neighbor already retired");
        p.earlier.push_back(static_cast<std::size_t>(it - alive.begin()));
        --left[static_cast<std::size_t>(j)];
        --left[static_cast<std::size_t>(i)];
      }
      alive.push_back(static_cast<int>(i));
      max_alive = std::max(max_alive, alive.size());
      for (std::size_t pos = alive.size(); pos-- > 0;) {
        const int c = alive[pos];
        if (left[static_cast<std::size_t>(c)] == 0) {
          p.retirees.push_back(pos);
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
        }
      }
    }
    if (!alive.empty()) throw InternalError("alive list should drain");
  }
  if (max_alive > static_cast<std::size_t>(caps.frontier_cap))
    throw OracleTooLarge("sweep width " + std::to_string(max_alive) + " exceeds cap " +
                         std::to_string(caps.frontier_cap) + "; use a smaller window");
  double states_bound = 1.0;
  for (std::size_t i = 0; i < max_alive; ++i) {
    states_bound *= m.q;
    if (states_bound > static_cast<double>(1 << 26))
      throw OracleTooLarge("sweep state space exceeds the enumeration bound");
  }

  // Run the DP in linear long double with a running log offset; digits of a
  // state index follow the alive list, lowest digit first.
  const int q = m.q;
  std::vector<long double> layer{1.0L};
  std::vector<int> digits;
  double offset = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const CellPlan& p = plan[i];
    const std::size_t old_size = layer.size();
    std::vector<long double> next(old_size * static_cast<std::size_t>(q), 0.0L);
    digits.assign(digits.size(), 0);
    for (std::size_t idx = 0; idx < old_size; ++idx) {
      const long double w = layer[idx];
      if (w > 0.0L) {
        for (int s = 0; s < q; ++s) {
          if (p.pinned_spin >= 0 && s != p.pinned_spin) continue;
          double lt = p.local[static_cast<std::size_t>(s)];
          for (std::size_t pos : p.earlier) {
            const double a = log_a(s, digits[pos]);
            if (a == kNegInf) {
              lt = kNegInf;
              break;
            }
            lt += a;
          }
          if (lt != kNegInf)
            next[idx + old_size * static_cast<std::size_t>(s)] +=
                w * std::exp(static_cast<long double>(lt));
        }
      }
      for (std::size_t d = 0; d < digits.size(); ++d) {
        if (++digits[d] < q) break;
        digits[d] = 0;
      }
    }
    // Marginalize retired digits (positions recorded descending).
    for (std::size_t pos : p.retirees) {
      std::size_t below = 1;
      for (std::size_t d = 0; d < pos; ++d) below *= static_cast<std::size_t>(q);
      const std::size_t above = next.size() / (below * static_cast<std::size_t>(q));
      std::vector<long double> shrunk(below * above, 0.0L);
      for (std::size_t hi = 0; hi < above; ++hi)
        for (int s = 0; s < q; ++s)
          for (std::size_t lo = 0; lo < below; ++lo)
            shrunk[lo + below * hi] +=
                next[lo + below * (static_cast<std::size_t>(s) + static_cast<std::size_t>(q) * hi)];
      next.swap(shrunk);
    }
    std::size_t alive_count = 0;
    for (std::size_t sz = next.size(); sz > 1; sz /= static_cast<std::size_t>(q)) ++alive_count;
    digits.assign(alive_count, 0);
    layer.swap(next);
    long double mx = 0.0L;
    for (long double w : layer) mx = std::max(mx, w);
    if (mx <= 0.0L) return kNegInf;  // every extension hit a zero factor
    for (long double& w : layer) w /= mx;
    offset += static_cast<double>(std::log(mx));
  }
  if (layer.size() != 1) throw InternalError("sweep did not contract to a scalar");
  return offset + static_cast<double>(std::log(layer[0]));
}

std::vector<double> grid_marginal(const Graph& g, const QSpinParams& m,
                                  const PartialConfiguration& pin, int v,
                                  const DistanceShell& window, const OracleCaps& caps) {
  if (v < 0 || v >= g.vertex_count()) throw ArgumentError("vertex id out of range");
  if (pin.is_pinned(v)) throw ArgumentError("marginal requested for a pinned vertex");
  if (!g.has_coords()) return exact_marginal(g, m, pin, v, caps);
  bool found = false;
  for (int u : window.ball())
    if (u == v) found = true;
  if (!found) throw ArgumentError("window does not contain the target vertex");

  PartialConfiguration work = pin;
  std::vector<double> log_z(static_cast<std::size_t>(m.q), kNegInf);
  LogSumAccumulator norm;
  for (int s = 0; s < m.q; ++s) {
    work.pin(v, s);
    log_z[static_cast<std::size_t>(s)] = window_log_partition(g, m, work, window.ball(), caps);
    norm.add(log_z[static_cast<std::size_t>(s)]);
    work.unpin(v);
  }
  const double z = norm.log_sum();
  if (z == kNegInf)
    throw InfeasibleConditioning("no positive-weight window extension at vertex " +
                                 std::to_string(v));
  std::vector<double> mu(static_cast<std::size_t>(m.q), 0.0);
  for (int s = 0; s < m.q; ++s)
    mu[static_cast<std::size_t>(s)] = std::exp(log_z[static_cast<std::size_t>(s)] - z);
  return mu;
}

}  // namespace subquad
