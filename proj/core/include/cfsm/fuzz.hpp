#pragma once

// Seeded generation of systems and compatible peers, and randomized
// checking of the preservation results for composition.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfsm/gateway.hpp"
#include "cfsm/properties.hpp"

namespace cfsm {

struct fuzz_params {
  std::uint64_t seed = 42;
  std::size_t max_states = 5;
  std::size_t max_participants = 4;
  std::size_t messages = 3;
  std::size_t iterations = 200;
  bool require_sequential_gateways = false;

  // Generator biases, in percent, for the kind of each state.
  unsigned terminal_bias = 30;
  unsigned input_bias = 40;
  // Percent of component systems made of the gateway machine and a single
  // partner running its dual; the rest are fully random.
  unsigned dual_bias = 50;
  // Attempts per component system at hitting the deadlock-freedom premise.
  std::size_t premise_attempts = 16;
  std::size_t max_configurations = 200'000;
  // 0 = hardware concurrency.
  std::size_t threads = 0;

  /// Throws precondition_violation when a bound is zero.
  void validate() const;
};

/// Random machine of `owner` talking to `partners`: every state is terminal,
/// offers inputs, or offers tau-guarded outputs, with distinct messages per
/// state. `sequential` limits every state to one outgoing transition.
machine random_machine(std::mt19937_64& rng, const fuzz_params& params,
                       const participant& owner,
                       const std::vector<participant>& partners,
                       bool sequential = false);

/// Random closed system over `params.max_participants` participants at most.
system random_system(const fuzz_params& params);
system random_system(std::mt19937_64& rng, const fuzz_params& params,
                     const std::vector<participant>& domain,
                     const std::string& name);

/// Dual of `m` owned by `owner`: output segments become inputs, inputs
/// become tau-guarded outputs; partners are assigned round-robin. Throws
/// assertion_failure if the result is not compatible with `m`.
machine derive_compatible_peer(const machine& m, const participant& owner,
                               const std::vector<participant>& partners);

struct fuzz_violation {
  std::size_t iteration = 0;
  std::string theorem; // deadlock-freedom, lock-freedom,
                       // strong-lock-freedom, projection, implication-chain
  std::string left;    // serialized component systems
  std::string right;
  std::string h;
  std::string k;
  std::string witness;
};

struct fuzz_stats {
  std::size_t iterations = 0;
  std::size_t composable = 0;
  std::size_t skipped = 0; // exploration cap exceeded
  std::size_t left_deadlock_free = 0;
  std::size_t right_deadlock_free = 0;
  std::size_t deadlock_premise = 0;
  std::size_t lock_premise = 0;
  std::size_t strong_lock_premise = 0;
  std::size_t sequential_pairs = 0;
  std::size_t projection_checked = 0;
  std::size_t composed_configurations = 0;
};

struct fuzz_report {
  fuzz_params params;
  fuzz_stats stats;
  std::vector<fuzz_violation> violations;

  std::size_t count(std::string_view theorem) const;
};

fuzz_report run_preservation_fuzz(const fuzz_params& params);

std::string fuzz_report_to_json(const fuzz_report& r);

} // namespace cfsm
