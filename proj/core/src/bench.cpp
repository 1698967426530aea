#include "subquad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "subquad/errors.hpp"
#include "subquad/estimator.hpp"
#include "subquad/graph.hpp"
#include "subquad/lattice.hpp"
#include "subquad/lazy_sampler.hpp"
#include "subquad/rng.hpp"
#include "subquad/saw_tree.hpp"
#include "subquad/spin_model.hpp"

namespace subquad {

namespace {

constexpr int kVertexSampleCap = 256;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> sampled_vertices(int n) {
  const int m = std::min(n, kVertexSampleCap);
  const int stride = std::max(1, n / m);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out.push_back(i * stride);
  return out;
}

std::string join_notes(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Marginal-estimation cost of the sampled-boundary estimator, summed over a
// vertex sample and scaled back to the full vertex set.
void run_fast_hardcore(BenchRow& row, std::uint64_t seed) {
  const std::uint64_t graph_seed =
      RngStream::derive(seed, "bench-graph", static_cast<std::uint64_t>(row.n)).next_u64();
  const Graph g = gen_random_bounded(row.n, 4, graph_seed);
  const double lambda = 1.0 / 12.0;
  row.note = join_notes(check_regime(g.max_degree(), lambda, 1).warnings);

  HardcoreEstimatorConfig cfg;
  cfg.k = 1;
  cfg.C = 1.0;
  cfg.fail = 1e-3;
  const std::vector<int> sample = sampled_vertices(row.n);
  std::int64_t steps = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const std::uint64_t call_seed = RngStream::derive(seed, "bench-call", i).next_u64();
    const MarginalEstimate est = estimate_marginal_zero(g, lambda, sample[i], cfg, call_seed);
    steps += est.steps_consumed + est.tree_nodes;
    sum += est.value;
  }
  const std::int64_t scale = row.n / static_cast<int>(sample.size());
  row.steps = steps * scale;
  row.estimate = sum / static_cast<double>(sample.size());
}

// Deterministic walk-tree evaluation deep enough that the truncation gap is
// below eps/(2n), the per-marginal accuracy a telescoped count needs.
void run_weitz_baseline(BenchRow& row, std::uint64_t seed) {
  const std::uint64_t graph_seed =
      RngStream::derive(seed, "bench-graph", static_cast<std::uint64_t>(row.n)).next_u64();
  const Graph g = gen_random_bounded(row.n, 4, graph_seed);
  const double lambda = 1.0 / 12.0;
  const int delta = std::max(2, g.max_degree());
  // The tree recursion contracts below the uniqueness threshold; the
  // estimator-side warnings do not apply to a deterministic evaluation.
  if (lambda >= check_regime(delta, lambda, 1).lambda_uniqueness) {
    row.note = "fugacity is at or above the tree uniqueness threshold";
  }

  const double raw =
      std::log(2.0 * row.n / row.eps) / std::log(static_cast<double>(delta));
  const int ell = std::max(1, static_cast<int>(std::ceil(raw)));
  const TwoSpinParams m = hardcore(lambda);

  const std::vector<int> sample = sampled_vertices(row.n);
  std::int64_t steps = 0;
  double sum = 0.0;
  for (int v : sample) {
    SawTree tree = build_saw(g, v, ell);
    steps += tree.size();
    PartialConfiguration b0(tree.size());
    PartialConfiguration b1(tree.size());
    for (int id : tree.frontier_at(ell)) {
      b0.pin(id, 0);
      b1.pin(id, 1);
    }
    const double m0 = saw_marginal_zero(tree, m, b0);
    const double m1 = saw_marginal_zero(tree, m, b1);
    sum += 0.5 * (m0 + m1);
  }
  const std::int64_t scale = row.n / static_cast<int>(sample.size());
  row.steps = steps * scale;
  row.estimate = sum / static_cast<double>(sample.size());
}

double config_log_weight(const Graph& g, const QSpinParams& m, const PartialConfiguration& sigma) {
  double log_w = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) log_w += std::log(m.field(sigma.spin(v)));
  for (const auto& [u, v] : g.edges()) log_w += std::log(m.a(sigma.spin(u), sigma.spin(v)));
  return log_w;
}

// One full telescoping pass of the polynomial-growth counting pipeline on a
// near-square grid; the row's estimate is the resulting log Z.
void run_lattice(BenchRow& row, std::uint64_t seed) {
  int w = 1;
  while (w * w < row.n) w *= 2;
  const int h = row.n / w;
  if (w * h != row.n) throw ArgumentError("grid sizes must be powers of two");
  const Graph g = gen_grid(w, h);
  const QSpinParams m = hardcore(0.2).to_qspin();
  GrowthParams gp;
  gp.c0 = 5.0;
  gp.d = 2;
  gp.C = 1.0;
  gp.r = 6.0;
  gp.validate_for(g);

  // Only the sampler-side regime matters here; radius selection and pinning
  // report their own convergence caveats.
  std::vector<std::string> notes;
  if (!check_regime(g.max_degree(), 0.2, 1).sampler_regime) {
    notes.push_back("fugacity is not below 1/(Delta-1); per-draw budgets are heuristic");
  }
  const int radius = recursion_radius(g, m.q, gp, &notes);
  const int n = g.vertex_count();

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  AdaptivePinning ap = adaptive_pinning(g, m, gp, order);
  notes.insert(notes.end(), ap.warnings.begin(), ap.warnings.end());
  row.note = join_notes(notes);

  const int ell = quad_depth(n);
  LazySampler sampler(g, m, radius);
  PartialConfiguration prefix(n);
  std::int64_t steps = 0;
  double log_x = 0.0;
  for (int i = 0; i < n; ++i) {
    const int v = order[static_cast<std::size_t>(i)];
    const BoundaryTable table = build_boundary_table(g, m, prefix, v, ell, gp);
    const double m_raw = std::ceil(static_cast<double>(n) * gp.C * gp.C *
                                   std::pow(gp.r, -table.ell_prime));
    const std::int64_t m_draws = std::max<std::int64_t>(1, static_cast<std::int64_t>(m_raw));
    const std::uint64_t call_seed =
        RngStream::derive(seed, "bench-call", static_cast<std::uint64_t>(i)).next_u64();
    const MarginalEstimate est = lattice_table_estimate(g, table, sampler, prefix,
                                                        ap.sigma.spin(v), m_draws, gp, 1e-3,
                                                        call_seed);
    if (!(est.value > 0.0)) throw InternalError("telescoping factor vanished");
    steps += est.steps_consumed + m_draws;
    log_x += std::log(est.value);
    prefix.pin(v, ap.sigma.spin(v));
  }
  row.steps = steps;
  row.estimate = config_log_weight(g, m, ap.sigma) - log_x;
}

}  // namespace

SlopeFit fit_loglog(const std::vector<BenchRow>& rows) {
  SlopeFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : rows) {
    if (!row.ok || row.steps <= 0 || row.n <= 0) continue;
    xs.push_back(std::log(static_cast<double>(row.n)));
    ys.push_back(std::log(static_cast<double>(row.steps)));
  }
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 2) return fit;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    sx += xs[static_cast<std::size_t>(i)];
    sy += ys[static_cast<std::size_t>(i)];
    sxx += xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(i)];
    sxy += xs[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(i)];
    syy += ys[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(i)];
  }
  const double denom = fit.points * sxx - sx * sx;
  if (!(denom > 0.0)) return fit;
  fit.slope = (fit.points * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / fit.points;

  double sse = 0.0;
  double sst = 0.0;
  const double mean_y = sy / fit.points;
  for (int i = 0; i < fit.points; ++i) {
    const double pred = fit.intercept + fit.slope * xs[static_cast<std::size_t>(i)];
    sse += (ys[static_cast<std::size_t>(i)] - pred) * (ys[static_cast<std::size_t>(i)] - pred);
    sst += (ys[static_cast<std::size_t>(i)] - mean_y) * (ys[static_cast<std::size_t>(i)] - mean_y);
  }
  fit.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  if (fit.points > 2) {
    const double var_slope = (sse / (fit.points - 2)) / (denom / fit.points);
    fit.stderr_ = std::sqrt(std::max(0.0, var_slope));
  }
  return fit;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  const auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  };
  std::ostringstream os;
  os << "tag,n,eps,wall_ms,steps,estimate,seed,ok,note\n";
  os.precision(17);
  for (const auto& row : rows) {
    os << escape(row.tag) << ',' << row.n << ',' << row.eps << ',' << row.wall_ms << ','
       << row.steps << ',' << row.estimate << ',' << row.seed << ','
       << (row.ok ? "true" : "false") << ',' << escape(row.note) << '\n';
  }
  return os.str();
}

ScalingReport scaling_run(const std::string& family, const std::string& algorithm,
                          const std::vector<int>& sizes, double eps, std::uint64_t seed) {
  if (sizes.empty()) throw ArgumentError("need at least one size");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ArgumentError("sizes must be strictly ascending");
  }
  if (sizes.front() < 2) throw ArgumentError("sizes must be at least 2");
  if (!(eps > 0.0)) throw ArgumentError("accuracy target must be positive");

  const bool random_family = family == "random4";
  if (!random_family && family != "grid") {
    throw ArgumentError("unknown family: " + family);
  }
  if (random_family) {
    if (algorithm != "fast-hardcore" && algorithm != "weitz-baseline") {
      throw ArgumentError("family random4 supports fast-hardcore and weitz-baseline");
    }
  } else if (algorithm != "lattice") {
    throw ArgumentError("family grid supports only lattice");
  }

  ScalingReport report;
  report.family = family;
  report.algorithm = algorithm;
  for (int n : sizes) {
    BenchRow row;
    row.tag = algorithm;
    row.n = n;
    row.eps = eps;
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (algorithm == "fast-hardcore") {
        run_fast_hardcore(row, seed);
      } else if (algorithm == "weitz-baseline") {
        run_weitz_baseline(row, seed);
      } else {
        run_lattice(row, seed);
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.note = e.what();
    }
    row.wall_ms = elapsed_ms(t0);
    report.rows.push_back(row);
  }
  report.fit = fit_loglog(report.rows);
  return report;
}

}  // namespace subquad
