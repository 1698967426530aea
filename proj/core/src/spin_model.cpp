#include "subquad/spin_model.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace subquad {

using nlohmann::json;

void QSpinParams::validate() const {
  if (q < 2) throw ArgumentError("spin systems need q >= 2");
  if (A.size() != static_cast<std::size_t>(q) * static_cast<std::size_t>(q))
    throw ArgumentError("interaction matrix must be q x q");
  if (b.size() != static_cast<std::size_t>(q)) throw ArgumentError("field vector must have q entries");
  for (int s = 0; s < q; ++s) {
    if (!(field(s) > 0.0) || !std::isfinite(field(s)))
      throw ArgumentError("field weights must be positive and finite");
    for (int t = 0; t < q; ++t) {
      if (a(s, t) < 0.0 || !std::isfinite(a(s, t)))
        throw ArgumentError("interaction weights must be nonnegative and finite");
      if (a(s, t) != a(t, s)) throw ArgumentError("interaction matrix must be symmetric");
    }
  }
}

void TwoSpinParams::validate() const {
  if (beta < 0.0 || gamma < 0.0 || !(lambda > 0.0))
    throw ArgumentError("two-spin systems need beta, gamma >= 0 and lambda > 0");
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(lambda))
    throw ArgumentError("two-spin parameters must be finite");
}

SpinModel SpinModel::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad model json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind")) throw ArgumentError("model json needs \"kind\"");
  SpinModel m;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "hardcore") {
      m.kind = Kind::hardcore;
      m.two_spin = hardcore(j.at("lambda").get<double>());
    } else if (kind == "two_spin") {
      m.kind = Kind::two_spin;
      m.two_spin = {j.at("beta").get<double>(), j.at("gamma").get<double>(),
                    j.at("lambda").get<double>()};
    } else if (kind == "q_spin") {
      m.kind = Kind::q_spin;
      m.q_spin.q = j.at("q").get<int>();
      for (const auto& row : j.at("A"))
        for (const auto& x : row) m.q_spin.A.push_back(x.get<double>());
      for (const auto& x : j.at("b")) m.q_spin.b.push_back(x.get<double>());
      m.q_spin.validate();
      return m;
    } else {
      throw ArgumentError("unknown model kind: " + kind);
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad model json: ") + e.what());
  }
  m.two_spin.validate();
  m.q_spin = m.two_spin.to_qspin();
  return m;
}

std::string SpinModel::to_json_text() const {
  json j;
  switch (kind) {
    case Kind::hardcore:
      j = {{"kind", "hardcore"}, {"lambda", two_spin.lambda}};
      break;
    case Kind::two_spin:
      j = {{"kind", "two_spin"},
           {"beta", two_spin.beta},
           {"gamma", two_spin.gamma},
           {"lambda", two_spin.lambda}};
      break;
    case Kind::q_spin: {
      json rows = json::array();
      for (int s = 0; s < q_spin.q; ++s) {
        json row = json::array();
        for (int t = 0; t < q_spin.q; ++t) row.push_back(q_spin.a(s, t));
        rows.push_back(row);
      }
      j = {{"kind", "q_spin"}, {"q", q_spin.q}, {"A", rows}, {"b", q_spin.b}};
      break;
    }
  }
  return j.dump();
}

bool locally_feasible(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin) {
  if (pin.size() != g.vertex_count()) throw ArgumentError("configuration size mismatch");
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!pin.is_pinned(v)) continue;
    const int s = pin.spin(v);
    if (s >= m.q) throw ArgumentError("pinned spin exceeds q");
    if (!(m.field(s) > 0.0)) return false;
    for (int u : g.neighbors(v))
      if (u > v && pin.is_pinned(u) && m.a(s, pin.spin(u)) == 0.0) return false;
  }
  return true;
}

LogWeight LogWeight::zero() { return {-std::numeric_limits<double>::infinity()}; }

LogWeight LogWeight::from_value(double v) {
  if (v < 0.0 || std::isnan(v)) throw ArgumentError("weights must be nonnegative");
  return {std::log(v)};  // log(0) = -inf is the intended zero
}

bool LogWeight::is_zero() const { return std::isinf(log) && log < 0.0; }

LogWeight& LogWeight::operator*=(LogWeight o) {
  if (is_zero() || o.is_zero())
    log = -std::numeric_limits<double>::infinity();
  else
    log += o.log;
  return *this;
}

double LogWeight::value() const { return std::exp(log); }

void LogSumAccumulator::add(double log_term) {
  if (std::isinf(log_term) && log_term < 0.0) return;  // zero term
  if (count_ == 0 || log_term > max_) {
    if (count_ > 0) sum_ *= std::exp(static_cast<long double>(max_ - log_term));
    max_ = log_term;
  }
  sum_ += std::exp(static_cast<long double>(log_term - max_));
  ++count_;
}

double LogSumAccumulator::log_sum() const {
  if (count_ == 0 || sum_ <= 0.0L) return -std::numeric_limits<double>::infinity();
  return max_ + static_cast<double>(std::log(sum_));
}

}  // namespace subquad
