#pragma once

// Identifiers, action labels and a generic finite state automaton.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfsm/error.hpp"

namespace cfsm {

struct participant {
  std::string name;
  auto operator<=>(const participant&) const = default;
};

struct message {
  std::string name;
  auto operator<=>(const message&) const = default;
};

using state_id = std::string;

/// True for non-empty strings over [A-Za-z0-9_'].
bool is_token(std::string_view s);

/// `A->B!m`, `A->B?m` or tau. The subject of an output is its sender, of an
/// input its receiver.
class action_label {
public:
  enum class kind : std::uint8_t { tau, output, input };

  action_label() = default;

  static action_label tau() { return {}; }
  static action_label output(participant sender, participant receiver,
                             message msg);
  static action_label input(participant sender, participant receiver,
                            message msg);

  kind type() const noexcept { return kind_; }
  bool is_tau() const noexcept { return kind_ == kind::tau; }
  bool is_output() const noexcept { return kind_ == kind::output; }
  bool is_input() const noexcept { return kind_ == kind::input; }

  const participant& sender() const noexcept { return sender_; }
  const participant& receiver() const noexcept { return receiver_; }
  const message& msg() const noexcept { return msg_; }

  /// Owner-side endpoint; undefined for tau.
  const participant& subject() const noexcept {
    return kind_ == kind::output ? sender_ : receiver_;
  }
  /// The other endpoint; undefined for tau.
  const participant& partner() const noexcept {
    return kind_ == kind::output ? receiver_ : sender_;
  }
  bool mentions(const participant& p) const noexcept {
    return kind_ != kind::tau && (sender_ == p || receiver_ == p);
  }

  std::string str() const;

  auto operator<=>(const action_label&) const = default;

private:
  action_label(kind k, participant s, participant r, message m);

  kind kind_ = kind::tau;
  participant sender_;
  participant receiver_;
  message msg_;
};

std::ostream& operator<<(std::ostream& os, const action_label& l);

template <class Label>
struct basic_transition {
  state_id source;
  Label label;
  state_id target;

  auto operator<=>(const basic_transition&) const = default;
};

/// Finite state automaton without accepting states. Transitions are kept
/// sorted (source, label, target) and duplicate-free; the state set always
/// contains the initial state and every transition endpoint.
template <class Label>
class automaton {
public:
  using label_type = Label;
  using transition = basic_transition<Label>;

  automaton() : automaton(state_id{"0"}, {}) {}

  automaton(state_id initial, std::vector<transition> transitions,
            std::set<state_id> extra_states = {})
      : initial_(std::move(initial)), states_(std::move(extra_states)),
        transitions_(std::move(transitions)) {
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                       transitions_.end());
    states_.insert(initial_);
    for (const auto& t : transitions_) {
      states_.insert(t.source);
      states_.insert(t.target);
    }
  }

  const state_id& initial() const noexcept { return initial_; }
  const std::set<state_id>& states() const noexcept { return states_; }
  const std::vector<transition>& transitions() const noexcept {
    return transitions_;
  }
  bool contains(const state_id& q) const { return states_.count(q) != 0; }

  std::size_t out_degree(const state_id& q) const {
    auto [b, e] = outgoing_range(q);
    return static_cast<std::size_t>(e - b);
  }

  /// Outgoing transitions of `q` as a contiguous slice of transitions().
  std::pair<typename std::vector<transition>::const_iterator,
            typename std::vector<transition>::const_iterator>
  outgoing_range(const state_id& q) const {
    auto b = std::lower_bound(
        transitions_.begin(), transitions_.end(), q,
        [](const transition& t, const state_id& s) { return t.source < s; });
    auto e = std::upper_bound(
        b, transitions_.end(), q,
        [](const state_id& s, const transition& t) { return s < t.source; });
    return {b, e};
  }

  std::vector<transition> incoming(const state_id& q) const {
    std::vector<transition> out;
    for (const auto& t : transitions_)
      if (t.target == q) out.push_back(t);
    return out;
  }

  bool operator==(const automaton&) const = default;

private:
  state_id initial_;
  std::set<state_id> states_;
  std::vector<transition> transitions_;
};

using transition = basic_transition<action_label>;
using fsa = automaton<action_label>;

/// States reachable from `from`, including `from` itself, in sorted order.
template <class Label>
std::set<state_id> reachable_states(const automaton<Label>& a,
                                    const state_id& from) {
  if (!a.contains(from))
    throw error(errc::unknown_state, "unknown state '" + from + "'");
  std::set<state_id> seen{from};
  std::vector<state_id> frontier{from};
  while (!frontier.empty()) {
    std::vector<state_id> next;
    for (const auto& q : frontier) {
      auto [b, e] = a.outgoing_range(q);
      for (auto it = b; it != e; ++it)
        if (seen.insert(it->target).second) next.push_back(it->target);
    }
    frontier = std::move(next);
  }
  return seen;
}

/// Outgoing (label, target) pairs of `q`, ordered by label then target.
template <class Label>
std::vector<std::pair<Label, state_id>> successors(const automaton<Label>& a,
                                                   const state_id& q) {
  if (!a.contains(q))
    throw error(errc::unknown_state, "unknown state '" + q + "'");
  std::vector<std::pair<Label, state_id>> out;
  auto [b, e] = a.outgoing_range(q);
  for (auto it = b; it != e; ++it) out.emplace_back(it->label, it->target);
  return out;
}

std::string to_string(const transition& t);

} // namespace cfsm
