#pragma once

// Communicating finite-state machines with tau-guarded outputs.

#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "cfsm/model.hpp"

namespace cfsm {

/// A validated CFSM owned by `subject()`. Every output transition leaves a
/// state whose only incoming transition is a tau, and every tau leads to a
/// state whose only outgoing transition is an output. Instances can only be
/// obtained through validate_cfsm() or normalize_outputs().
class machine {
public:
  const fsa& graph() const noexcept { return fsa_; }
  const participant& subject() const noexcept { return subject_; }
  const state_id& initial() const noexcept { return fsa_.initial(); }
  const std::set<state_id>& states() const noexcept { return fsa_.states(); }
  const std::vector<transition>& transitions() const noexcept {
    return fsa_.transitions();
  }
  bool contains(const state_id& q) const { return fsa_.contains(q); }

  /// Participants named by labels, the owner excluded.
  std::set<participant> partners() const;

  bool operator==(const machine&) const = default;

private:
  friend machine validate_cfsm(fsa, participant);
  machine(fsa f, participant subject)
      : fsa_(std::move(f)), subject_(std::move(subject)) {}

  fsa fsa_;
  participant subject_;
};

/// Source position (line, column) of a transition, for diagnostics.
using transition_locator =
    std::function<std::pair<int, int>(const transition&)>;

/// Every violation of the well-formedness and locality rules, one
/// diagnostic per offending transition. Empty iff the automaton is a valid
/// `subject`-local CFSM.
std::vector<diagnostic> cfsm_violations(const fsa& f,
                                        const participant& subject,
                                        const transition_locator& where = {});

/// Throws cfsm::error carrying all violations.
machine validate_cfsm(fsa f, participant subject);

struct state_class {
  bool terminal = false;
  bool sending = false;
  bool receiving = false;
  bool mixed = false;
  // Only meaningful for non-terminal states.
  bool asymmetric_sending = false;
  bool asymmetric_receiving = false;
  bool asymmetric_mixed = false;

  bool operator==(const state_class&) const = default;
};

/// Classic classification plus the asymmetric one. A committed output
/// state counts as asymmetric sending; asymmetric mixed means the state
/// offers both a tau and an input.
state_class classify_state(const machine& m, const state_id& q);

struct machine_profile {
  bool in_deterministic = true;
  bool out_deterministic = true;
  bool sequential = true;
  bool has_asymmetric_mixed = false;
  std::set<state_id> terminal_states;

  bool io_deterministic() const noexcept {
    return in_deterministic && out_deterministic;
  }
};

machine_profile profile(const machine& m);

/// Reroutes each output p -> r through a fresh committed state `p#out<i>`
/// entered by a tau. Requires a tau-free, `subject`-local automaton.
machine normalize_outputs(const fsa& f, const participant& subject);

} // namespace cfsm
