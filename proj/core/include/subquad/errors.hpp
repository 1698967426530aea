// Error taxonomy shared across the library. Callers that map failures to
// process exit codes (the CLI) rely on these exact types.
#pragma once

#include <stdexcept>
#include <string>

namespace subquad {

// Malformed input: bad graph data, contradictory flags, contract violations.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// An exact-computation request exceeds the configured enumeration caps.
struct OracleTooLarge : std::runtime_error {
  explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// A conditioning has no feasible extension (all extensions have zero weight).
struct InfeasibleConditioning : std::runtime_error {
  explicit InfeasibleConditioning(const std::string& what) : std::runtime_error(what) {}
};

// Parameters fall outside the regime a routine needs to make progress
// (e.g. fugacity too large for the sampler's step-budget formula).
struct OutOfRegime : std::runtime_error {
  explicit OutOfRegime(const std::string& what) : std::runtime_error(what) {}
};

// A neighborhood-growth hypothesis failed on the given graph.
struct GrowthAssumptionViolated : std::runtime_error {
  explicit GrowthAssumptionViolated(const std::string& what) : std::runtime_error(what) {}
};

// A single sampler invocation ran out of its step budget. Recoverable: the
// sampler state is rolled back, so callers may retry with a fresh stream.
struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A randomized routine exhausted its retry allowance.
struct SamplerStuck : std::runtime_error {
  explicit SamplerStuck(const std::string& what) : std::runtime_error(what) {}
};

// A violated internal consistency check; always a bug, never user error.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace subquad
