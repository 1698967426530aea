#include <cmath>
#include <vector>

#include "doctest.h"
#include "subquad/errors.hpp"
#include "subquad/graph.hpp"
#include "subquad/oracle.hpp"
#include "subquad/saw_tree.hpp"
#include "subquad/spin_model.hpp"

#include "json.hpp"

using namespace subquad;

TEST_CASE("saw_tree: cycle structure on C4") {
  const Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  SawTree t(c4, 0);
  t.expand_to_depth(8);
  CHECK(t.frontier().empty());
  CHECK(t.size() == 9);  // root, two arms of three free nodes, two closure copies of the root
  int forced = 0;
  for (int id = 0; id < t.size(); ++id) {
    const SawNode& nd = t.node(id);
    if (nd.forced >= 0) {
      ++forced;
      CHECK(!t.expandable(id));
      CHECK(nd.depth == 4);
      CHECK(nd.g_vertex == 0);
    }
    if (nd.parent >= 0) {
      CHECK(nd.depth == t.node(nd.parent).depth + 1);
      CHECK(c4.has_edge(nd.g_vertex, t.node(nd.parent).g_vertex));
    }
  }
  CHECK(forced == 2);
}

TEST_CASE("saw_tree: tree graphs reproduce themselves") {
  const Graph p4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  SawTree t(p4, 1);
  t.expand_to_depth(8);
  CHECK(t.size() == 4);  // a tree has one walk per vertex
  for (int id = 0; id < t.size(); ++id) CHECK(t.node(id).forced < 0);
}

TEST_CASE("saw_tree: fully expanded marginal equals the oracle") {
  struct Case {
    Graph g;
    double lambda;
  };
  const std::vector<Case> cases = {
      {Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}), 0.8},  // C5
      {Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 0.3},  // K4
      {gen_grid(3, 3), 0.45},
  };
  for (const auto& [g, lam] : cases) {
    const TwoSpinParams m = hardcore(lam);
    for (int v = 0; v < g.vertex_count(); ++v) {
      SawTree t = build_saw(g, v, g.vertex_count() + 1);
      REQUIRE(t.frontier().empty());
      const double saw = saw_marginal_zero(t, m, PartialConfiguration(t.size()));
      const double ex = exact_marginal(g, m.to_qspin(), PartialConfiguration(g.vertex_count()), v)[0];
      CHECK(saw == doctest::Approx(ex).epsilon(1e-12));
    }
  }
}

TEST_CASE("saw_tree: boundary pins map onto graph conditioning for trees") {
  const Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const TwoSpinParams m = hardcore(0.6);
  SawTree t = build_saw(p3, 0, 1);  // truncate right after the first step
  const auto frontier = t.frontier_at(1);
  REQUIRE(frontier.size() == 1);
  for (int spin : {0, 1}) {
    PartialConfiguration boundary(t.size());
    boundary.pin(frontier[0], spin);
    PartialConfiguration pin(3);
    pin.pin(1, spin);  // depth-1 tree node is graph vertex 1
    const double got = saw_marginal_zero(t, m, boundary);
    const double want = exact_marginal(p3, m.to_qspin(), pin, 0)[0];
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("saw_tree: incomplete boundary is rejected") {
  const Graph g = gen_grid(4, 4);
  SawTree t = build_saw(g, 5, 2);
  CHECK(!t.frontier().empty());
  CHECK_THROWS_AS(saw_marginal_zero(t, hardcore(0.5), PartialConfiguration(t.size())),
                  ArgumentError);
  CHECK_THROWS_AS(saw_marginal_zero(t, hardcore(0.5), PartialConfiguration(3)), ArgumentError);
}

TEST_CASE("saw_tree: truncation interval brackets the true marginal") {
  const Graph g = gen_grid(4, 4);
  const TwoSpinParams m = hardcore(0.25);
  const double exact = exact_marginal(g, m.to_qspin(), PartialConfiguration(16), 5)[0];
  double prev_width = 2.0;
  for (int ell = 1; ell <= 6; ++ell) {
    const MarginalInterval iv = weitz_baseline(g, m, 5, ell);
    CHECK(iv.lo <= exact + 1e-12);
    CHECK(exact <= iv.hi + 1e-12);
    CHECK(iv.width() <= prev_width + 1e-12);
    prev_width = iv.width();
  }
  CHECK(weitz_baseline(g, m, 5, 16).width() < 1e-6);
  // only defined for antiferromagnetic interactions
  CHECK_THROWS_AS(weitz_baseline(g, TwoSpinParams{1.2, 1.2, 1.0}, 5, 3), ArgumentError);
}

TEST_CASE("saw_tree: removed vertices behave like a vertex-deleted subgraph") {
  const Graph g = gen_grid(3, 3);
  std::vector<char> removed(9, 0);
  removed[4] = 1;  // delete the center
  const TwoSpinParams m = hardcore(0.7);
  SawTree t = build_saw(g, 0, 10, removed);
  CHECK(t.frontier().empty());
  const double got = saw_marginal_zero(t, m, PartialConfiguration(t.size()));
  // reference: same grid with the center dropped
  const Graph ring = gen_grid(3, 3, {{1, 1}});
  // ring vertex at coord (0,0) is 0 in both labelings
  const double want =
      exact_marginal(ring, m.to_qspin(), PartialConfiguration(ring.vertex_count()), 0)[0];
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(build_saw(g, 4, 3, removed), ArgumentError);
}

TEST_CASE("saw_tree: json dump is well-formed and consistent") {
  const Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  SawTree t = build_saw(c4, 0, 8);
  const auto j = nlohmann::json::parse(t.dump_json());
  CHECK(j["nodes"].size() == static_cast<std::size_t>(t.size()));
  CHECK(j["root_vertex"] == 0);
  int forced = 0;
  for (const auto& nd : j["nodes"]) forced += nd.contains("forced");
  CHECK(forced == 2);
}
