// Spin-system parameter types. A two-spin system is (beta, gamma, lambda)
// with edge interaction [[beta, 1], [1, gamma]] and external field (1,
// lambda); the hard-core model is the special case beta = 1, gamma = 0. The
// general q-spin form carries a symmetric nonnegative q x q interaction
// matrix A and a positive field vector b. Spins are 0-based everywhere; for
// two-spin systems spin 1 is the "occupied" state that carries lambda.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subquad/errors.hpp"
#include "subquad/graph.hpp"

namespace subquad {

struct QSpinParams {
  int q = 2;
  std::vector<double> A;  // row-major q x q, symmetric, entries >= 0
  std::vector<double> b;  // size q, entries > 0

  double a(int s, int t) const { return A[static_cast<std::size_t>(s * q + t)]; }
  double field(int s) const { return b[static_cast<std::size_t>(s)]; }
  void validate() const;
};

struct TwoSpinParams {
  double beta = 1.0;
  double gamma = 0.0;
  double lambda = 1.0;

  bool is_antiferromagnetic() const { return beta * gamma < 1.0; }
  bool is_hardcore() const { return beta == 1.0 && gamma == 0.0; }
  QSpinParams to_qspin() const { return {2, {beta, 1.0, 1.0, gamma}, {1.0, lambda}}; }
  void validate() const;
};

inline TwoSpinParams hardcore(double lambda) { return {1.0, 0.0, lambda}; }

// Model files: {"kind": "hardcore", "lambda": x}
//              {"kind": "two_spin", "beta": b, "gamma": g, "lambda": x}
//              {"kind": "q_spin", "q": q, "A": [[...]...], "b": [...]}
struct SpinModel {
  enum class Kind { hardcore, two_spin, q_spin };
  Kind kind = Kind::hardcore;
  TwoSpinParams two_spin;  // valid unless kind == q_spin
  QSpinParams q_spin;      // always usable (two-spin kinds are converted)

  int q() const { return q_spin.q; }
  static SpinModel from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Partial spin assignment over ids 0..n-1; -1 marks "unpinned".
class PartialConfiguration {
 public:
  PartialConfiguration() = default;
  explicit PartialConfiguration(int n) : spin_(static_cast<std::size_t>(n), -1) {}

  int size() const { return static_cast<int>(spin_.size()); }
  bool is_pinned(int v) const { return spin_[idx(v)] >= 0; }
  int spin(int v) const { return spin_[idx(v)]; }
  std::optional<int> get(int v) const {
    int8_t s = spin_[idx(v)];
    return s < 0 ? std::nullopt : std::optional<int>(s);
  }
  int pinned_count() const { return pinned_; }

  void pin(int v, int s) {
    if (s < 0 || s > 127) throw ArgumentError("spin out of range");
    if (spin_[idx(v)] >= 0) throw ArgumentError("vertex " + std::to_string(v) + " already pinned");
    spin_[idx(v)] = static_cast<int8_t>(s);
    ++pinned_;
  }
  void unpin(int v) {
    if (spin_[idx(v)] < 0) throw ArgumentError("vertex " + std::to_string(v) + " not pinned");
    spin_[idx(v)] = -1;
    --pinned_;
  }

 private:
  std::size_t idx(int v) const {
    if (v < 0 || v >= size()) throw ArgumentError("id out of range: " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }
  std::vector<int8_t> spin_;
  int pinned_ = 0;
};

// Local feasibility: every pinned vertex has positive field weight and every
// edge between pinned vertices has positive interaction weight. For
// permissive systems this is exactly "extends to a positive-weight
// configuration".
bool locally_feasible(const Graph& g, const QSpinParams& m, const PartialConfiguration& pin);

// Nonnegative weights in log space; zero is quiet -inf.
struct LogWeight {
  double log = 0.0;

  static LogWeight one() { return {0.0}; }
  static LogWeight zero();
  static LogWeight from_value(double v);
  bool is_zero() const;
  LogWeight& operator*=(LogWeight o);
  double value() const;
};

// Streaming log-sum-exp with a running maximum; extended-precision
// accumulation keeps desk-scale sums accurate to ~1e-12 relative.
class LogSumAccumulator {
 public:
  void add(double log_term);
  void add(LogWeight w) { add(w.log); }
  bool empty() const { return count_ == 0; }
  double log_sum() const;  // -inf when nothing positive was added

 private:
  double max_ = 0.0;
  long double sum_ = 0.0L;
  uint64_t count_ = 0;
};

}  // namespace subquad
