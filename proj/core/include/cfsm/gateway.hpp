#pragma once

// Gateways, (H,K)-composability and composition of two systems.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cfsm/compatibility.hpp"
#include "cfsm/semantics.hpp"

namespace cfsm {

/// Where a fresh gateway state comes from.
struct fresh_origin {
  enum class role {
    // p' in  p -K->H?m-> p' -tau-> q -H->A!m-> r ; origin is p -tau-> q
    peer_input,
    // p' in  p -A->H?m-> p' -tau-> p'' -H->K!m-> r ; origin is the input
    own_input,
    // p'' of the same segment
    peer_output,
  };
  role kind;
  transition origin;
};

class gateway {
public:
  const machine& cfsm() const noexcept { return cfsm_; }
  const machine& original() const noexcept { return original_; }
  const participant& owner() const noexcept { return original_.subject(); }
  const participant& peer() const noexcept { return peer_; }
  /// States of the original machine.
  const std::set<state_id>& external_states() const noexcept {
    return external_;
  }
  /// Fresh states added by the construction.
  const std::set<state_id>& internal_states() const noexcept {
    return internal_;
  }
  const std::map<state_id, fresh_origin>& provenance() const noexcept {
    return provenance_;
  }

private:
  friend gateway build_gateway(const machine&, const participant&);
  gateway(machine c, machine o, participant peer)
      : cfsm_(std::move(c)), original_(std::move(o)), peer_(std::move(peer)) {}

  machine cfsm_;
  machine original_;
  participant peer_;
  std::set<state_id> external_;
  std::set<state_id> internal_;
  std::map<state_id, fresh_origin> provenance_;
};

/// Turns an H-local machine into a forwarder towards `peer`. Fresh states
/// are named `p>q` (before a tau-guarded output), `p?r` and `p!r` (around
/// a forwarded input), with `'` appended on clashes.
gateway build_gateway(const machine& m, const participant& peer);

/// Maps a gateway state to the original state whose progress it reflects
/// towards the peer system.
state_id nof_state(const gateway& gw, const state_id& q);

struct composability_issue {
  std::string code; // domain-overlap, not-compatible, not-in-deterministic,
                    // not-out-deterministic, asymmetric-mixed
  std::string detail;
};

struct composability_report {
  bool disjoint_domains = false;
  machine_profile h_profile;
  machine_profile k_profile;
  bool compatible = false;
  bool composable = false;
  std::vector<composability_issue> issues;

  bool has_issue(std::string_view code) const;
};

composability_report check_composability(const system& s1,
                                         const participant& h,
                                         const system& s2,
                                         const participant& k);

struct composed_system {
  system sys;
  system left;
  system right;
  participant h;
  participant k;
  gateway left_gateway;
  gateway right_gateway;
  bool forced = false;
  composability_report report;
};

/// S1[H -> gw(S1(H), K)] + S2[K -> gw(S2(K), H)]. Refuses non-composable
/// inputs unless `force` is set; overlapping domains are always refused.
composed_system compose_systems(const system& s1, const participant& h,
                                const system& s2, const participant& k,
                                bool force = false);

enum class side { left, right };

/// Recovers a component configuration: fresh states after a peer input map
/// back to the input's source, fresh states before a peer output map forward
/// to the output's target.
configuration project_configuration(const composed_system& cs,
                                    const configuration& s, side which);

struct projection_counterexample {
  configuration config;
  std::string clause; // left-projection, right-projection, nof-correspondence
};

struct projection_check {
  bool holds = true;
  std::size_t checked = 0;
  std::vector<projection_counterexample> counterexamples;
};

/// Checks, for every configuration of `lts`, that both projections are
/// reachable in the component systems and that the nof images of the two
/// gateway states are related by the greatest io-correspondence of the
/// original machines.
projection_check verify_projection_lemma(const composed_system& cs,
                                         const sem_lts& lts);

} // namespace cfsm
