#pragma once

// Deadlock, lock and strong lock freedom over the asymmetric semantics.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfsm/semantics.hpp"

namespace cfsm {

enum class property_kind { deadlock_freedom, lock_freedom, strong_lock_freedom };
enum class witness_kind { deadlock, lock, slf_violation };

std::string_view to_string(property_kind p);
std::string_view to_string(witness_kind k);

struct witness {
  witness_kind kind = witness_kind::deadlock;
  configuration config;
  std::optional<participant> who;

  // lock: every configuration reachable from `config`, none of which has an
  // edge involving `who`.
  std::vector<configuration> reachable;

  // slf violation: trace[0] == config and trace[i] -labels[i]-> trace[i+1].
  // With a cycle_start the run is a lasso closing back on
  // trace[*cycle_start]; otherwise it ends in a configuration without
  // outgoing edges.
  std::vector<sem_label> labels;
  std::vector<configuration> trace;
  std::optional<std::size_t> cycle_start;

  /// Rendered labels for runs, rendered configurations for locks.
  std::vector<std::string> evidence() const;
};

struct property_report {
  property_kind property = property_kind::deadlock_freedom;
  bool holds = true;
  std::vector<witness> witnesses;
  /// Set when more violations exist than were kept.
  bool truncated = false;
};

inline constexpr std::size_t default_witness_cap = 16;

/// Reachable configurations without outgoing edges that still enable some
/// participant.
property_report find_deadlocks(const system& sys, const sem_lts& lts,
                               std::size_t max_witnesses = default_witness_cap);

/// Pairs (s, A) with s(A) non-terminal from which no A-involving edge is
/// reachable.
property_report find_locks(const system& sys, const sem_lts& lts,
                           std::size_t max_witnesses = default_witness_cap);

/// Pairs (s, A) with A enabled at s and some maximal run from s that never
/// involves A.
property_report check_strong_lock_freedom(
    const system& sys, const sem_lts& lts,
    std::size_t max_witnesses = default_witness_cap);

/// Replays a witness against the LTS; false when the evidence does not hold
/// up.
bool validate_witness(const system& sys, const sem_lts& lts,
                      const witness& w);

/// Runs the three checkers and confirms SLF => LF => DF on this instance.
/// Throws errc::internal_inconsistency when the chain breaks.
bool check_implication_chain(const system& sys, const sem_lts& lts);

} // namespace cfsm
