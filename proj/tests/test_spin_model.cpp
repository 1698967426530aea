#include <cmath>
#include <limits>

#include "doctest.h"
#include "subquad/errors.hpp"
#include "subquad/graph.hpp"
#include "subquad/spin_model.hpp"

using namespace subquad;

TEST_CASE("spin_model: hardcore helper and q-spin conversion") {
  const TwoSpinParams m = hardcore(0.75);
  CHECK(m.beta == 1.0);
  CHECK(m.gamma == 0.0);
  CHECK(m.is_hardcore());
  CHECK(m.is_antiferromagnetic());
  const QSpinParams q = m.to_qspin();
  CHECK(q.q == 2);
  CHECK(q.a(0, 0) == 1.0);
  CHECK(q.a(0, 1) == 1.0);
  CHECK(q.a(1, 0) == 1.0);
  CHECK(q.a(1, 1) == 0.0);
  CHECK(q.field(0) == 1.0);
  CHECK(q.field(1) == 0.75);
}

TEST_CASE("spin_model: validation rejects bad parameters") {
  TwoSpinParams m = hardcore(-0.5);
  CHECK_THROWS_AS(m.validate(), ArgumentError);
  QSpinParams q{2, {1.0, 2.0, 1.0, 0.0}, {1.0, 1.0}};  // asymmetric
  CHECK_THROWS_AS(q.validate(), ArgumentError);
  QSpinParams neg{2, {1.0, 1.0, 1.0, -0.1}, {1.0, 1.0}};
  CHECK_THROWS_AS(neg.validate(), ArgumentError);
  QSpinParams field{2, {1.0, 1.0, 1.0, 1.0}, {1.0, 0.0}};  // zero field
  CHECK_THROWS_AS(field.validate(), ArgumentError);
  QSpinParams size{3, {1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(size.validate(), ArgumentError);
}

TEST_CASE("spin_model: json round-trips for all kinds") {
  const SpinModel hc = SpinModel::from_json_text(R"({"kind":"hardcore","lambda":0.4})");
  CHECK(hc.kind == SpinModel::Kind::hardcore);
  CHECK(hc.two_spin.lambda == 0.4);
  CHECK(hc.q_spin.a(1, 1) == 0.0);

  const SpinModel ts =
      SpinModel::from_json_text(R"({"kind":"two_spin","beta":1.2,"gamma":1.2,"lambda":1.0})");
  CHECK(ts.two_spin.beta == 1.2);

  const SpinModel qs = SpinModel::from_json_text(
      R"({"kind":"q_spin","q":3,"A":[[1,2,0],[2,1,1],[0,1,1]],"b":[1,0.5,2]})");
  CHECK(qs.q() == 3);
  CHECK(qs.q_spin.a(0, 1) == 2.0);
  CHECK(qs.q_spin.field(2) == 2.0);

  for (const SpinModel* m : {&hc, &ts, &qs}) {
    const SpinModel back = SpinModel::from_json_text(m->to_json_text());
    CHECK(back.kind == m->kind);
    CHECK(back.q_spin.A == m->q_spin.A);
    CHECK(back.q_spin.b == m->q_spin.b);
  }

  CHECK_THROWS_AS(SpinModel::from_json_text("{"), ArgumentError);
  CHECK_THROWS_AS(SpinModel::from_json_text(R"({"kind":"nope"})"), ArgumentError);
  CHECK_THROWS_AS(SpinModel::from_json_text(R"({"kind":"hardcore","lambda":-1})"), ArgumentError);
}

TEST_CASE("spin_model: partial configuration bookkeeping") {
  PartialConfiguration pin(4);
  CHECK(pin.size() == 4);
  CHECK(pin.pinned_count() == 0);
  pin.pin(2, 1);
  CHECK(pin.is_pinned(2));
  CHECK(pin.spin(2) == 1);
  CHECK(pin.get(1) == std::nullopt);
  CHECK(pin.pinned_count() == 1);
  CHECK_THROWS_AS(pin.pin(2, 0), ArgumentError);  // double pin
  CHECK_THROWS_AS(pin.pin(1, -1), ArgumentError);
  CHECK_THROWS_AS(pin.unpin(3), ArgumentError);
  CHECK_THROWS_AS(pin.pin(4, 0), ArgumentError);  // out of range
  pin.unpin(2);
  CHECK(pin.pinned_count() == 0);
}

TEST_CASE("spin_model: local feasibility on the hard-core model") {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const QSpinParams m = hardcore(1.0).to_qspin();
  PartialConfiguration pin(3);
  pin.pin(0, 1);
  CHECK(locally_feasible(g, m, pin));
  pin.pin(1, 1);
  CHECK(!locally_feasible(g, m, pin));  // adjacent occupied pair
  pin.unpin(1);
  pin.pin(2, 1);
  CHECK(locally_feasible(g, m, pin));  // non-adjacent pair is fine
}

TEST_CASE("spin_model: log weights and streaming log-sum-exp") {
  CHECK(LogWeight::one().log == 0.0);
  CHECK(LogWeight::zero().is_zero());
  CHECK(LogWeight::from_value(0.0).is_zero());
  LogWeight w = LogWeight::from_value(2.0);
  w *= LogWeight::from_value(3.0);
  CHECK(w.value() == doctest::Approx(6.0).epsilon(1e-14));
  w *= LogWeight::zero();
  CHECK(w.is_zero());

  LogSumAccumulator acc;
  CHECK(acc.empty());
  CHECK(acc.log_sum() == -std::numeric_limits<double>::infinity());
  for (double x : {1.0, 2.0, 4.0}) acc.add(std::log(x));
  CHECK(acc.log_sum() == doctest::Approx(std::log(7.0)).epsilon(1e-14));
  // scale invariance across a huge max shift
  LogSumAccumulator big;
  for (double x : {1.0, 2.0, 4.0}) big.add(std::log(x) + 700.0);
  CHECK(big.log_sum() == doctest::Approx(std::log(7.0) + 700.0).epsilon(1e-14));
}
