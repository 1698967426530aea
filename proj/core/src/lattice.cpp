#include "subquad/lattice.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "subquad/errors.hpp"
#include "subquad/rng.hpp"

namespace subquad {

namespace {

constexpr std::int64_t kRowCap = std::int64_t{1} << 20;
constexpr double kRowCapBits = 20.0;
constexpr int kMaxAttempts = 16;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Largest sphere and ball sizes at radius r, exact on small graphs, probed
// on a deterministic pseudo-random vertex sample otherwise. A strided sample
// would alias with lattice embeddings (every k-th vertex of a width-k grid
// lies in one column) and miss the large interior spheres entirely.
struct ShellExtent {
  int sphere = 0;
  int ball = 0;
};
ShellExtent max_shell_extent(const Graph& g, int r) {
  const int n = g.vertex_count();
  ShellExtent ext;
  const auto probe = [&](int v) {
    const DistanceShell sh = ball(g, v, r);
    ext.sphere = std::max(ext.sphere, static_cast<int>(sh.sphere().size()));
    ext.ball = std::max(ext.ball, static_cast<int>(sh.vertices.size()));
  };
  if (n <= 512) {
    for (int v = 0; v < n; ++v) probe(v);
  } else {
    RngStream picks = RngStream::derive(g.digest(), "shell-extent-probe");
    for (int i = 0; i < 96; ++i) probe(static_cast<int>(picks.next_below(n)));
  }
  return ext;
}

std::int64_t row_count(int q, std::size_t free_count) {
  std::int64_t rows = 1;
  for (std::size_t i = 0; i < free_count; ++i) {
    rows *= q;
    if (rows > kRowCap) {
      throw OracleTooLarge("free boundary too large to enumerate; reduce the depth");
    }
  }
  return rows;
}

}  // namespace

void GrowthParams::validate() const {
  if (!(c0 >= 1.0)) throw ArgumentError("growth constant must be at least 1");
  if (d < 2) throw ArgumentError("growth dimension must be at least 2");
  if (!(C > 0.0)) throw ArgumentError("decay prefactor must be positive");
  if (!(r > 1.0)) throw ArgumentError("decay base must exceed 1");
}

void GrowthParams::validate_for(const Graph& g) const {
  validate();
  if (static_cast<double>(g.max_degree()) > c0) {
    throw ArgumentError("growth constant is below the maximum degree");
  }
}

int quad_depth(int n) {
  const double bits = std::log2(static_cast<double>(std::max(n, 2)));
  return std::clamp(static_cast<int>(std::ceil(bits / 5.0)), 2, 8);
}

int poly_growth_depth(int n, const GrowthParams& gp, int q) {
  gp.validate();
  if (n < 2) throw ArgumentError("graph too small");
  if (q < 2) throw ArgumentError("at least two spins required");
  const double raw = 0.99 * std::pow(std::log(static_cast<double>(n)), 1.0 / gp.d) /
                     (2.0 * gp.c0 * std::log(static_cast<double>(q)));
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

// A sampler draw enumerates every free-sphere configuration each time a new
// pinning pattern shows up around a vertex, and each configuration costs an
// exact conditional over the whole ball, so the radius must keep spheres far
// smaller than what a single one-off table enumeration could afford, and
// balls small enough that the per-configuration oracle call stays cheap.
constexpr double kSplitCapBits = 10.0;
constexpr int kSplitBallCap = 40;

bool radius_practical(const Graph& g, int q, int r) {
  const ShellExtent ext = max_shell_extent(g, r);
  return static_cast<double>(ext.sphere) * std::log2(static_cast<double>(q)) <= kSplitCapBits &&
         ext.ball <= kSplitBallCap;
}

int recursion_radius(const Graph& g, int q, const GrowthParams& gp,
                     std::vector<std::string>* warnings) {
  gp.validate();
  if (q < 2) throw ArgumentError("at least two spins required");
  const double e = std::exp(1.0);
  int last_practical = 1;
  for (int r = 1; r <= 64; ++r) {
    if (!radius_practical(g, q, r)) continue;
    last_practical = r;
    const double s = gp.c0 * std::pow(static_cast<double>(r), static_cast<double>(gp.d));
    if (2.0 * e * q * (1.0 + s) * gp.C * std::pow(gp.r, -r) <= 1.0) return r;
  }
  for (int r = 1; r <= 64; ++r) {
    if (!radius_practical(g, q, r)) continue;
    const double s = gp.c0 * std::pow(static_cast<double>(r), static_cast<double>(gp.d));
    if ((q - 1) * gp.C * std::pow(gp.r, -r) * s <= 0.9) {
      if (warnings) {
        warnings->push_back(
            "no enumerable radius certifies recursive-sampler convergence; using a weaker "
            "contraction criterion at radius " +
            std::to_string(r));
      }
      return r;
    }
  }
  if (warnings) {
    warnings->push_back("no radius certifies recursive-sampler convergence; using radius " +
                        std::to_string(last_practical));
  }
  return last_practical;
}

std::int64_t lattice_budget(int r, const GrowthParams& gp, double eps_b) {
  if (!(eps_b > 0.0) || eps_b >= 1.0) throw ArgumentError("failure budget must lie in (0, 1)");
  const double s = gp.c0 * std::pow(static_cast<double>(r), static_cast<double>(gp.d));
  return static_cast<std::int64_t>(std::ceil(8.0 * (1.0 + s) * (std::log(1.0 / eps_b) + 1.0)));
}

std::int64_t BoundaryTable::index_of(std::span<const int> spins) const {
  if (spins.size() != free_boundary.size()) throw ArgumentError("boundary spin count mismatch");
  std::int64_t idx = 0;
  std::int64_t mult = 1;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] < 0 || spins[i] >= q) throw ArgumentError("boundary spin out of range");
    idx += mult * spins[i];
    mult *= q;
  }
  return idx;
}

BoundaryTable build_boundary_table(const Graph& g, const QSpinParams& m,
                                   PartialConfiguration& pin, int v, int ell,
                                   const GrowthParams& gp, const OracleCaps& caps) {
  m.validate();
  gp.validate();
  if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  if (pin.is_pinned(v)) throw ArgumentError("cannot tabulate a pinned vertex");
  if (ell < 1) throw ArgumentError("depth must be at least 1");

  BoundaryTable table;
  table.center = v;
  table.q = m.q;
  DistanceShell shell;
  if (gp.d == 2 && ell >= 2) {
    ThinSphere thin = find_thin_sphere(g, v, ell, gp.c0);
    table.ell_prime = thin.radius;
    shell = std::move(thin.shell);
  } else {
    table.ell_prime = ell;
    shell = ball(g, v, ell);
  }
  for (int w : shell.sphere()) {
    if (!pin.is_pinned(w)) table.free_boundary.push_back(w);
  }

  const std::int64_t rows = row_count(m.q, table.free_boundary.size());
  table.entries.assign(static_cast<std::size_t>(rows * m.q), -1.0);
  table.feasible.assign(static_cast<std::size_t>(rows), 0);

  std::vector<int> digits(table.free_boundary.size(), 0);
  for (std::int64_t idx = 0; idx < rows; ++idx) {
    std::int64_t rem = idx;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = static_cast<int>(rem % m.q);
      rem /= m.q;
    }
    for (std::size_t i = 0; i < digits.size(); ++i) pin.pin(table.free_boundary[i], digits[i]);
    try {
      std::vector<double> mu = grid_marginal(g, m, pin, v, shell, caps);
      std::copy(mu.begin(), mu.end(), table.entries.begin() + idx * m.q);
      table.feasible[static_cast<std::size_t>(idx)] = 1;
    } catch (const InfeasibleConditioning&) {
      // row stays marked infeasible
    } catch (...) {
      for (int w : table.free_boundary) pin.unpin(w);
      throw;
    }
    for (int w : table.free_boundary) pin.unpin(w);
  }
  return table;
}

MarginalEstimate lattice_table_estimate(const Graph& g, const BoundaryTable& table,
                                        LazySampler& sampler, PartialConfiguration& pin,
                                        int k_spin, std::int64_t m_draws, const GrowthParams& gp,
                                        double delta_fail, std::uint64_t stream_seed) {
  if (k_spin < 0 || k_spin >= table.q) throw ArgumentError("spin out of range");
  if (m_draws < 1) throw ArgumentError("draw count must be positive");
  if (!(delta_fail > 0.0) || delta_fail >= 1.0) {
    throw ArgumentError("failure budget must lie in (0, 1)");
  }
  if (pin.is_pinned(table.center)) throw ArgumentError("table center is pinned");
  for (int w : table.free_boundary) {
    if (pin.is_pinned(w)) throw ArgumentError("table was built for a different pinning");
  }

  MarginalEstimate out;
  out.ell = table.ell_prime;
  out.boundary_size = static_cast<int>(table.free_boundary.size());

  if (table.free_boundary.empty()) {
    if (!table.feasible[0]) {
      throw InfeasibleConditioning("pinning admits no configuration inside the ball");
    }
    out.value = table.row(0)[static_cast<std::size_t>(k_spin)];
    return out;
  }

  const double eps_b =
      delta_fail /
      (8.0 * static_cast<double>(m_draws) * static_cast<double>(table.free_boundary.size()));
  const std::int64_t cap = lattice_budget(sampler.radius(), gp, eps_b);

  double sum = 0.0;
  std::vector<int> digits(table.free_boundary.size(), 0);
  std::vector<int> drawn;
  drawn.reserve(table.free_boundary.size());
  for (std::int64_t j = 0; j < m_draws; ++j) {
    drawn.clear();
    try {
      for (std::size_t pos = 0; pos < table.free_boundary.size(); ++pos) {
        const int w = table.free_boundary[pos];
        bool done = false;
        for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
          RngStream rng = RngStream::derive(
              stream_seed, "boundary",
              (static_cast<std::uint64_t>(j) * table.free_boundary.size() + pos) * kMaxAttempts +
                  static_cast<std::uint64_t>(attempt));
          Budget budget(cap);
          try {
            digits[pos] = sampler.draw(pin, w, budget, rng);
            done = true;
          } catch (const BudgetExhausted&) {
            ++out.retries;
          }
          out.steps_consumed += budget.consumed;
        }
        if (!done) throw SamplerStuck("a boundary vertex kept exhausting its step budget");
        drawn.push_back(w);
      }
    } catch (...) {
      for (auto it = drawn.rbegin(); it != drawn.rend(); ++it) pin.unpin(*it);
      throw;
    }
    const std::int64_t idx = table.index_of(digits);
    for (auto it = drawn.rbegin(); it != drawn.rend(); ++it) pin.unpin(*it);
    if (!table.feasible[static_cast<std::size_t>(idx)]) {
      throw InternalError("sampled boundary configuration hits an infeasible table row");
    }
    sum += table.row(idx)[static_cast<std::size_t>(k_spin)];
  }
  out.value = sum / static_cast<double>(m_draws);
  return out;
}

MarginalEstimate lattice_marginal_estimator(const Graph& g, const QSpinParams& m,
                                            PartialConfiguration& pin, int v, int k_spin, int ell,
                                            const GrowthParams& gp, double delta_fail,
                                            std::uint64_t stream_seed, const OracleCaps& caps) {
  gp.validate_for(g);
  const BoundaryTable table = build_boundary_table(g, m, pin, v, ell, gp, caps);
  LazySampler sampler(g, m, recursion_radius(g, m.q, gp), caps);
  const double m_raw = std::ceil(static_cast<double>(g.vertex_count()) * gp.C * gp.C *
                                 std::pow(gp.r, -table.ell_prime));
  const std::int64_t m_draws = std::max<std::int64_t>(1, static_cast<std::int64_t>(m_raw));
  return lattice_table_estimate(g, table, sampler, pin, k_spin, m_draws, gp, delta_fail,
                                stream_seed);
}

AdaptivePinning adaptive_pinning(const Graph& g, const QSpinParams& m, const GrowthParams& gp,
                                 const std::vector<int>& order, const OracleCaps& caps) {
  m.validate();
  gp.validate_for(g);
  const int n = g.vertex_count();
  if (order.size() != static_cast<std::size_t>(n)) throw ArgumentError("order must list every vertex");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw ArgumentError("order is not a permutation of the vertices");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }

  AdaptivePinning ap;
  ap.order = order;
  ap.sigma = PartialConfiguration(n);
  const double t_raw = std::log(2.0 * m.q * gp.C) / std::log(gp.r);
  ap.t = std::max(1, static_cast<int>(std::ceil(t_raw)));
  const double margin = gp.C * std::pow(gp.r, -ap.t);
  const double floor_mass = 1.0 / (2.0 * m.q);

  int uncertified = 0;
  std::vector<int> digits;
  for (int v : ap.order) {
    const DistanceShell shell = ball(g, v, ap.t);
    std::vector<int> free;
    for (int w : shell.sphere()) {
      if (!ap.sigma.is_pinned(w)) free.push_back(w);
    }
    // The all-zero boundary is row 0 of the enumeration, so scanning rows in
    // order both tries the preferred boundary first and provides the
    // fallback to the first feasible one.
    const std::int64_t rows = row_count(m.q, free.size());
    std::vector<double> mu;
    bool found = false;
    digits.assign(free.size(), 0);
    for (std::int64_t idx = 0; idx < rows && !found; ++idx) {
      std::int64_t rem = idx;
      for (std::size_t i = 0; i < free.size(); ++i) {
        digits[i] = static_cast<int>(rem % m.q);
        rem /= m.q;
      }
      for (std::size_t i = 0; i < free.size(); ++i) ap.sigma.pin(free[i], digits[i]);
      try {
        mu = grid_marginal(g, m, ap.sigma, v, shell, caps);
        found = true;
      } catch (const InfeasibleConditioning&) {
      } catch (...) {
        for (int w : free) ap.sigma.unpin(w);
        throw;
      }
      for (int w : free) ap.sigma.unpin(w);
    }
    if (!found) {
      throw InfeasibleConditioning("no boundary configuration on the pinning sphere is feasible");
    }
    int best = 0;
    for (int s = 1; s < m.q; ++s) {
      if (mu[static_cast<std::size_t>(s)] > mu[static_cast<std::size_t>(best)]) best = s;
    }
    if (mu[static_cast<std::size_t>(best)] < floor_mass) {
      throw OutOfRegime("greedy pinning found a vertex whose best conditional mass is below 1/(2q)");
    }
    const double certified = mu[static_cast<std::size_t>(best)] - margin;
    if (certified < floor_mass) ++uncertified;
    ap.mass.push_back(certified);
    ap.sigma.pin(v, best);
  }
  if (uncertified > 0) {
    ap.warnings.push_back(std::to_string(uncertified) + " of " + std::to_string(n) +
                          " greedy picks fall below the 1/(2q) mass once the decay margin is "
                          "subtracted; the supplied decay constants may be optimistic");
  }
  return ap;
}

LatticeCountResult fpras_lattice(const Graph& g, const QSpinParams& m, double eps,
                                 const GrowthParams& gp, const LatticeRunConfig& run,
                                 const OracleCaps& caps) {
  m.validate();
  gp.validate_for(g);
  if (!(eps > 0.0) || eps >= 1.0) throw ArgumentError("relative accuracy must lie in (0, 1)");
  const int n = g.vertex_count();
  if (n < 1) throw ArgumentError("graph must be nonempty");

  const auto t0 = std::chrono::steady_clock::now();
  const int t_copies = static_cast<int>(std::ceil(2.0 / eps));
  const double eps0 = (1.0 - std::exp(-1.0)) / 2.0;
  const double want = std::ceil(10.0 * std::exp(4.0 * m.q * m.q) / (eps0 * eps0));

  const std::int64_t n_union64 = static_cast<std::int64_t>(n) * t_copies;
  if (n_union64 > (std::int64_t{1} << 26)) {
    throw ArgumentError("accuracy target needs more disjoint copies than fit in memory");
  }
  const int n_union = static_cast<int>(n_union64);
  const std::vector<Edge> base_edges = g.edges();
  std::vector<Edge> union_edges;
  union_edges.reserve(base_edges.size() * static_cast<std::size_t>(t_copies));
  std::optional<std::vector<Coord>> union_coords;
  for (int c = 0; c < t_copies; ++c) {
    const int off = c * n;
    for (const auto& [a, b] : base_edges) union_edges.emplace_back(a + off, b + off);
  }
  if (g.has_coords()) {
    int min_x = g.coord(0)[0];
    int max_x = min_x;
    for (int v = 0; v < n; ++v) {
      min_x = std::min(min_x, g.coord(v)[0]);
      max_x = std::max(max_x, g.coord(v)[0]);
    }
    const int gap = max_x - min_x + 2;
    union_coords.emplace();
    union_coords->reserve(static_cast<std::size_t>(n_union));
    for (int c = 0; c < t_copies; ++c) {
      for (int v = 0; v < n; ++v) {
        union_coords->push_back({g.coord(v)[0] + c * gap, g.coord(v)[1]});
      }
    }
  }
  const Graph gu = Graph::from_edges(n_union, union_edges, std::move(union_coords));

  LatticeCountResult res;
  res.count.eps = eps;
  res.count.copies = t_copies;
  res.count.seed = run.seed;
  res.count.delta = gu.max_degree();
  const int ell = run.ell_override > 0
                      ? run.ell_override
                      : (gp.d == 2 ? quad_depth(n_union) : poly_growth_depth(n_union, gp, m.q));
  res.count.ell = ell;

  std::int64_t target =
      want >= 4e18 ? std::int64_t{4'000'000'000'000'000'000} : static_cast<std::int64_t>(want);
  res.count.per_call_failure = 1.0 / (static_cast<double>(n_union) * static_cast<double>(target));
  if (run.sample_cap > 0 && target > run.sample_cap) {
    target = run.sample_cap;
    res.count.truncated = true;
  } else if (target > 1'000'000 && run.wall_cap_ms <= 0) {
    throw ArgumentError(
        "the theoretical sample count is impractical to exhaust; set sample_cap or wall_cap_ms");
  }

  std::vector<int> order(static_cast<std::size_t>(n_union));
  for (int v = 0; v < n_union; ++v) order[static_cast<std::size_t>(v)] = v;
  AdaptivePinning ap = adaptive_pinning(gu, m, gp, order, caps);
  res.pin_t = ap.t;
  res.mass = ap.mass;
  res.warnings.insert(res.warnings.end(), ap.warnings.begin(), ap.warnings.end());

  const LogWeight w = config_weight(gu, m, ap.sigma);
  if (!std::isfinite(w.log)) {
    throw OutOfRegime(
        "the greedily pinned configuration has zero weight; the supplied decay constants are "
        "inconsistent with the system");
  }

  res.radius = recursion_radius(gu, m.q, gp, &res.warnings);
  LazySampler sampler(gu, m, res.radius, caps);

  std::vector<BoundaryTable> tables;
  tables.reserve(static_cast<std::size_t>(n_union));
  std::vector<std::int64_t> m_draws(static_cast<std::size_t>(n_union), 1);
  {
    PartialConfiguration prefix(n_union);
    for (int i = 0; i < n_union; ++i) {
      const int v = order[static_cast<std::size_t>(i)];
      tables.push_back(build_boundary_table(gu, m, prefix, v, ell, gp, caps));
      const BoundaryTable& table = tables.back();
      res.ell_prime.push_back(table.ell_prime);
      res.table_rows.push_back(table.rows());
      const double m_raw = std::ceil(static_cast<double>(n_union) * gp.C * gp.C *
                                     std::pow(gp.r, -table.ell_prime));
      m_draws[static_cast<std::size_t>(i)] =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(m_raw));
      prefix.pin(v, ap.sigma.spin(v));
    }
  }

  LogSumAccumulator acc;
  std::int64_t done = 0;
  for (std::int64_t s = 0; s < target; ++s) {
    if (run.wall_cap_ms > 0 && done > 0 && elapsed_ms(t0) > static_cast<double>(run.wall_cap_ms)) {
      res.count.truncated = true;
      break;
    }
    PartialConfiguration work(n_union);
    double log_x = 0.0;
    for (int i = 0; i < n_union; ++i) {
      const int v = order[static_cast<std::size_t>(i)];
      const std::uint64_t call = static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(n_union) +
                                 static_cast<std::uint64_t>(i);
      const std::uint64_t child_seed = RngStream::derive(run.seed, "count-call", call).next_u64();
      const MarginalEstimate est = lattice_table_estimate(
          gu, tables[static_cast<std::size_t>(i)], sampler, work, ap.sigma.spin(v),
          m_draws[static_cast<std::size_t>(i)], gp, res.count.per_call_failure, child_seed);
      if (!(est.value > 0.0)) throw InternalError("telescoping factor vanished");
      log_x += std::log(est.value);
      work.pin(v, ap.sigma.spin(v));
    }
    acc.add(log_x);
    ++done;
  }
  if (done == 0) throw InternalError("no telescoping samples were drawn");
  res.count.samples = done;
  const double log_mean = acc.log_sum() - std::log(static_cast<double>(done));
  res.count.log_z = (w.log - log_mean) / t_copies;
  res.count.wall_ms = elapsed_ms(t0);
  return res;
}

}  // namespace subquad
