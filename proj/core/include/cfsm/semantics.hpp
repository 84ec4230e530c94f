#pragma once

// Communicating systems and their asymmetric synchronous semantics.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cfsm/machine.hpp"

namespace cfsm {

/// Source position of a transition of a given participant's machine.
using system_locator = std::function<std::pair<int, int>(
    const participant&, const transition&)>;

/// Closed system: a participant-local machine per participant, and every
/// participant named in a label belongs to the domain.
class system {
public:
  const std::string& name() const noexcept { return name_; }
  const std::map<participant, machine>& machines() const noexcept {
    return machines_;
  }
  const machine& at(const participant& p) const;
  bool contains(const participant& p) const {
    return machines_.count(p) != 0;
  }
  /// Domain in sorted order.
  std::vector<participant> participants() const;

  bool operator==(const system&) const = default;

private:
  friend system validate_system(std::map<participant, machine>, std::string,
                                const system_locator&);
  system(std::string name, std::map<participant, machine> machines)
      : name_(std::move(name)), machines_(std::move(machines)) {}

  std::string name_;
  std::map<participant, machine> machines_;
};

system validate_system(std::map<participant, machine> machines,
                       std::string name = "S",
                       const system_locator& where = {});

/// Participant -> local state, defined on the whole system domain.
using configuration = std::map<participant, state_id>;

std::string to_string(const configuration& c);

/// Interaction `A->B:m`, or a tau step annotated with the participant that
/// moved.
class sem_label {
public:
  enum class kind : std::uint8_t { interaction, tau };

  static sem_label interaction(participant sender, participant receiver,
                               message msg);
  static sem_label tau(participant actor);

  kind type() const noexcept { return kind_; }
  bool is_tau() const noexcept { return kind_ == kind::tau; }
  const participant& sender() const noexcept { return sender_; }
  const participant& receiver() const noexcept { return receiver_; }
  const participant& actor() const noexcept { return sender_; }
  const message& msg() const noexcept { return msg_; }

  bool involves(const participant& p) const noexcept {
    return sender_ == p || (kind_ == kind::interaction && receiver_ == p);
  }

  /// `A->B:m` or `tau(A)`.
  std::string str() const;

  auto operator<=>(const sem_label&) const = default;

private:
  sem_label() = default;

  kind kind_ = kind::tau;
  participant sender_;
  participant receiver_;
  message msg_;
};

/// {sender, receiver} for interactions, {actor} for tau steps.
std::set<participant> participants_of(const sem_label& l);

struct sem_edge {
  std::size_t source;
  sem_label label;
  std::size_t target;

  auto operator<=>(const sem_edge&) const = default;
};

/// Reachable part of the semantics. Configurations are sorted; edges are
/// sorted by (source, label, target) and refer to configurations by index.
class sem_lts {
public:
  const std::vector<participant>& participants() const noexcept {
    return participants_;
  }
  const std::vector<configuration>& configurations() const noexcept {
    return configurations_;
  }
  const configuration& config(std::size_t i) const {
    return configurations_.at(i);
  }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<sem_edge>& edges() const noexcept { return edges_; }
  std::span<const sem_edge> out_edges(std::size_t i) const {
    return {edges_.data() + offsets_[i], edges_.data() + offsets_[i + 1]};
  }
  std::size_t size() const noexcept { return configurations_.size(); }
  std::optional<std::size_t> index_of(const configuration& c) const;

private:
  friend sem_lts build_semantics(const system&, std::size_t);

  std::vector<participant> participants_;
  std::vector<configuration> configurations_;
  std::size_t initial_ = 0;
  std::vector<sem_edge> edges_;
  std::vector<std::size_t> offsets_;
};

inline constexpr std::size_t default_max_configurations = 1'000'000;

/// Worklist exploration from the initial configuration. Exceeding
/// `max_configurations` raises errc::state_explosion_limit.
sem_lts build_semantics(const system& sys,
                        std::size_t max_configurations =
                            default_max_configurations);

/// Participants whose local state has an outgoing transition in their own
/// machine.
std::set<participant> enabled_participants(const system& sys,
                                           const configuration& s);

configuration initial_configuration(const system& sys);

} // namespace cfsm
