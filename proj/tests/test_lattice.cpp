#include <cmath>
#include <vector>

#include "doctest.h"
#include "subquad/errors.hpp"
#include "subquad/graph.hpp"
#include "subquad/lattice.hpp"
#include "subquad/lazy_sampler.hpp"
#include "subquad/oracle.hpp"
#include "subquad/rng.hpp"
#include "subquad/spin_model.hpp"

using namespace subquad;

namespace {

GrowthParams grid_growth(double r, double C = 1.0) {
  GrowthParams gp;
  gp.c0 = 5.0;
  gp.d = 2;
  gp.C = C;
  gp.r = r;
  return gp;
}

}  // namespace

TEST_CASE("lattice: depth schedule grows with log n and clamps") {
  CHECK(quad_depth(2) == 2);
  CHECK(quad_depth(1 << 10) == 2);
  CHECK(quad_depth(1 << 11) == 3);
  CHECK(quad_depth(1 << 20) == 4);
  CHECK(quad_depth(1 << 30) >= 6);
  for (int n : {2, 100, 1 << 15, 1 << 25}) {
    CHECK(quad_depth(n) >= 2);
    CHECK(quad_depth(n) <= 8);
  }
}

TEST_CASE("lattice: growth params validation") {
  GrowthParams gp = grid_growth(1.5);
  CHECK_NOTHROW(gp.validate());
  gp.r = 1.0;  // no decay
  CHECK_THROWS_AS(gp.validate(), ArgumentError);
  gp = grid_growth(1.5);
  gp.c0 = 3.0;  // grid max degree 4 > c0
  CHECK_THROWS_AS(gp.validate_for(gen_grid(4, 4)), ArgumentError);
  CHECK_NOTHROW(grid_growth(1.5).validate_for(gen_grid(4, 4)));
}

TEST_CASE("lattice: recursion radius covers small components exactly") {
  // strong assumed decay on a tiny graph: the certified radius swallows the
  // whole component and the sampler draws exact conditionals
  const Graph g = gen_grid(4, 4);
  std::vector<std::string> warnings;
  const int r = recursion_radius(g, 2, grid_growth(1.5), &warnings);
  CHECK(r >= 7);  // beyond the 4x4 diameter: spheres at r are empty
  CHECK(warnings.empty());
}

TEST_CASE("lattice: recursion radius falls back on weak decay") {
  const Graph g = gen_grid(16, 16);
  std::vector<std::string> warnings;
  const int r = recursion_radius(g, 2, grid_growth(6.0), &warnings);
  CHECK(r == 1);
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("weaker contraction") != std::string::npos);
}

TEST_CASE("lattice: per-draw budget formula") {
  // ceil(8 (1 + c0 r^d) (ln(1/eps) + 1))
  const GrowthParams gp = grid_growth(1.5);
  const double s1 = 5.0 * 1.0;
  CHECK(lattice_budget(1, gp, 0.01) ==
        static_cast<std::int64_t>(std::ceil(8.0 * (1 + s1) * (std::log(1.0 / 0.01) + 1))));
  CHECK(lattice_budget(2, gp, 0.01) > lattice_budget(1, gp, 0.01));
  CHECK(lattice_budget(1, gp, 1e-6) > lattice_budget(1, gp, 1e-2));
}

TEST_CASE("lattice: boundary table rows are exact conditionals") {
  const Graph g = gen_grid(4, 4);
  const QSpinParams m = hardcore(1.0).to_qspin();
  PartialConfiguration prefix(16);
  prefix.pin(0, 0);
  prefix.pin(1, 0);
  const BoundaryTable table = build_boundary_table(g, m, prefix, 5, 2, grid_growth(1.5));
  CHECK(table.center == 5);
  CHECK(table.q == 2);
  CHECK(table.ell_prime >= 1);
  CHECK(table.ell_prime <= 2);
  REQUIRE(table.rows() >= 1);
  std::int64_t feasible_rows = 0;
  for (std::int64_t row = 0; row < table.rows(); ++row) {
    if (!table.feasible[static_cast<std::size_t>(row)]) {
      CHECK(table.row(row)[0] == -1.0);
      continue;
    }
    ++feasible_rows;
    PartialConfiguration pin(16);
    pin.pin(0, 0);
    pin.pin(1, 0);
    std::int64_t idx = row;
    std::vector<int> spins;
    for (int b : table.free_boundary) {
      pin.pin(b, static_cast<int>(idx % table.q));
      spins.push_back(static_cast<int>(idx % table.q));
      idx /= table.q;
    }
    CHECK(table.index_of(spins) == row);
    const std::vector<double> mu = exact_marginal(g, m, pin, 5);
    for (int s = 0; s < table.q; ++s)
      CHECK(table.row(row)[static_cast<std::size_t>(s)] ==
            doctest::Approx(mu[static_cast<std::size_t>(s)]).epsilon(1e-11));
  }
  CHECK(feasible_rows >= 2);
}

TEST_CASE("lattice: adaptive pinning certifies mass and feasibility") {
  const Graph g = gen_grid(4, 4);
  const QSpinParams m = hardcore(1.0).to_qspin();
  const GrowthParams gp = grid_growth(1.5);
  std::vector<int> order(16);
  for (int i = 0; i < 16; ++i) order[static_cast<std::size_t>(i)] = i;
  const AdaptivePinning ap = adaptive_pinning(g, m, gp, order);
  CHECK(ap.order == order);
  CHECK(ap.t == 4);  // ceil(log(2*2*C)/log r) at C=1, r=1.5
  CHECK(ap.mass.size() == 16);
  for (double mass : ap.mass) CHECK(mass >= 1.0 / (2 * m.q));
  CHECK(ap.sigma.pinned_count() == 16);
  CHECK(locally_feasible(g, m, ap.sigma));
  // the pinned configuration reproduces the telescoped product: w(sigma)/Z
  double log_prod = 0.0;
  PartialConfiguration partial(16);
  for (int i = 0; i < 16; ++i) {
    const std::vector<double> mu = exact_marginal(g, m, partial, i);
    log_prod += std::log(mu[static_cast<std::size_t>(ap.sigma.spin(i))]);
    partial.pin(i, ap.sigma.spin(i));
  }
  const double log_z = exact_log_partition(g, m, PartialConfiguration(16));
  const double log_w = config_weight(g, m, ap.sigma).log;
  CHECK(log_prod == doctest::Approx(log_w - log_z).epsilon(1e-10));
}

TEST_CASE("lattice: table estimate is unbiased for the pinned marginal") {
  const Graph g = gen_grid(3, 3);
  const QSpinParams m = hardcore(1.0).to_qspin();
  const GrowthParams gp = grid_growth(1.5);
  PartialConfiguration prefix(9);
  prefix.pin(0, 0);
  const BoundaryTable table = build_boundary_table(g, m, prefix, 4, 2, gp);
  const std::vector<double> exact = exact_marginal(g, m, prefix, 4);
  LazySampler sampler(g, m, recursion_radius(g, 2, gp));
  const int reps = 3000;
  double sum = 0.0;
  for (int i = 0; i < reps; ++i) {
    PartialConfiguration pin(9);
    pin.pin(0, 0);
    const MarginalEstimate e = lattice_table_estimate(
        g, table, sampler, pin, 0, 64, gp, 1e-3,
        RngStream::derive(70, "table", static_cast<std::uint64_t>(i)).next_u64());
    sum += e.value;
  }
  const double mean = sum / reps;
  CHECK(std::abs(mean - exact[0]) <= 0.02);
}

TEST_CASE("lattice: end-to-end count lands near the oracle") {
  const Graph g = gen_grid(3, 3);
  const QSpinParams m = hardcore(1.0).to_qspin();
  const double exact = exact_log_partition(g, m, PartialConfiguration(9));
  LatticeRunConfig run;
  run.seed = 404;
  run.sample_cap = 40;
  const LatticeCountResult res = fpras_lattice(g, m, 0.5, grid_growth(1.5), run);
  CHECK(std::abs(std::exp(res.count.log_z - exact) - 1.0) <= 0.5);
  CHECK(res.count.truncated);
  CHECK(res.pin_t == 4);
  CHECK(res.radius >= 7);
  CHECK(!res.ell_prime.empty());
  CHECK(res.table_rows.size() == res.ell_prime.size());
  for (double mass : res.mass) CHECK(mass >= 0.25);
}

TEST_CASE("lattice: ising grid count") {
  const Graph g = gen_grid(3, 3);
  const QSpinParams m = TwoSpinParams{1.2, 1.2, 1.0}.to_qspin();
  const double exact = exact_log_partition(g, m, PartialConfiguration(9));
  LatticeRunConfig run;
  run.seed = 405;
  run.sample_cap = 40;
  const LatticeCountResult res = fpras_lattice(g, m, 0.5, grid_growth(1.5), run);
  CHECK(std::abs(std::exp(res.count.log_z - exact) - 1.0) <= 0.5);
}

TEST_CASE("lattice: deterministic under a fixed seed") {
  const Graph g = gen_grid(3, 3);
  const QSpinParams m = hardcore(1.0).to_qspin();
  LatticeRunConfig run;
  run.seed = 406;
  run.sample_cap = 20;
  const GrowthParams gp = grid_growth(1.5);
  const double a = fpras_lattice(g, m, 0.5, gp, run).count.log_z;
  const double b = fpras_lattice(g, m, 0.5, gp, run).count.log_z;
  CHECK(a == b);
  run.seed = 407;
  CHECK(fpras_lattice(g, m, 0.5, gp, run).count.log_z != a);
}

TEST_CASE("lattice: impractical sample targets are rejected") {
  const Graph g = gen_grid(8, 8);
  const QSpinParams m = hardcore(0.2).to_qspin();
  LatticeRunConfig run;
  run.seed = 1;
  CHECK_THROWS_AS(fpras_lattice(g, m, 0.2, grid_growth(6.0), run), ArgumentError);
  // a wall cap makes the same call legal and flags truncation
  run.wall_cap_ms = 50;
  const LatticeCountResult res = fpras_lattice(g, m, 0.2, grid_growth(6.0), run);
  CHECK(res.count.truncated);
  CHECK(res.count.samples >= 1);
}

TEST_CASE("lattice: depth override is honored") {
  const Graph g = gen_grid(3, 3);
  const QSpinParams m = hardcore(1.0).to_qspin();
  LatticeRunConfig run;
  run.seed = 7;
  run.sample_cap = 10;
  run.ell_override = 3;
  const LatticeCountResult res = fpras_lattice(g, m, 0.5, grid_growth(1.5), run);
  CHECK(res.count.ell == 3);
  for (int lp : res.ell_prime) {
    CHECK(lp >= 2);  // ceil(3/2)
    CHECK(lp <= 3);
  }
}
