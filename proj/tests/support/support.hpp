#pragma once

// Fixture loading and brute-force oracles shared by the unit and
// acceptance tests. Oracles follow the definitions directly and share no
// code with the library algorithms they check.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfsm/fuzz.hpp"
#include "cfsm/io.hpp"

namespace cfsm::test {

std::string fixture_path(const std::string& name);
system load(const std::string& name);
raw_system load_raw(const std::string& name);
/// Machine `p` of a raw fixture, validated.
machine raw_machine_of(const std::string& name, const std::string& p);

/// Machine from inline text: a single `machine` block body.
machine machine_from(const std::string& owner, const std::string& body);

std::vector<std::string> fixture_names();

// --- semantics ---------------------------------------------------------

/// Reachable configurations straight from the two semantic rules.
std::set<configuration> naive_reachable(const system& sys);

struct naive_step {
  sem_label label;
  configuration target;
};
std::vector<naive_step> naive_steps(const system& sys, const configuration& s);

/// Replays labelled steps from `from`; the tau steps are resolved by actor.
/// Returns the configurations visited, or nullopt if some step is missing.
/// With `end`, only resolutions finishing in that configuration count.
std::optional<std::vector<configuration>> replay(
    const system& sys, const sem_lts& lts, const configuration& from,
    const std::vector<sem_label>& run,
    const std::optional<configuration>& end = std::nullopt);

/// Parses "tau(A)" / "A->B:m".
sem_label label_of(const std::string& s);
std::vector<sem_label> labels_of(const std::vector<std::string>& ss);

// --- properties --------------------------------------------------------

/// A is locked at s: s(A) has local transitions and no path from s ever
/// takes an A-involving edge (paths enumerated explicitly).
bool oracle_locked(const system& sys, const sem_lts& lts, std::size_t s,
                   const participant& a);

/// Some maximal run from s avoids A: depth-first enumeration of A-avoiding
/// paths, reporting either a dead end or a repeated configuration.
bool oracle_slf_violated(const system& sys, const sem_lts& lts, std::size_t s,
                         const participant& a);

// --- compatibility -----------------------------------------------------

bool oracle_is_correspondence(const machine& m1, const machine& m2,
                              const std::set<state_pair>& r);

/// Union of all io-correspondences, by enumerating every relation.
/// Machines must have at most 4 states each.
std::set<state_pair> oracle_greatest_correspondence(const machine& m1,
                                                    const machine& m2);

// --- graphs ------------------------------------------------------------

/// Label-preserving bijection from the states of `a` to those of `b` that
/// maps initial to initial and every state in `fixed` to itself.
template <class Label>
std::optional<std::map<state_id, state_id>> find_isomorphism(
    const automaton<Label>& a, const automaton<Label>& b,
    const std::set<state_id>& fixed);

/// Renames the components of `c` through per-participant maps (missing
/// entries are kept).
configuration rename(const configuration& c,
                     const std::map<participant, std::map<state_id, state_id>>& r);

} // namespace cfsm::test

#include "support_iso.ipp"
