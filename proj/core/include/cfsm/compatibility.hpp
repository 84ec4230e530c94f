#pragma once

// io-projection, duality and the greatest io-correspondence.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cfsm/machine.hpp"

namespace cfsm {

/// `!m`, `?m` or tau: an action label with the partners erased.
class io_label {
public:
  enum class kind : std::uint8_t { tau, out, in };

  io_label() = default;
  static io_label tau() { return {}; }
  static io_label out(message m) { return {kind::out, std::move(m)}; }
  static io_label in(message m) { return {kind::in, std::move(m)}; }

  kind type() const noexcept { return kind_; }
  bool is_tau() const noexcept { return kind_ == kind::tau; }
  bool is_out() const noexcept { return kind_ == kind::out; }
  bool is_in() const noexcept { return kind_ == kind::in; }
  const message& msg() const noexcept { return msg_; }

  std::string str() const;

  auto operator<=>(const io_label&) const = default;

private:
  io_label(kind k, message m) : kind_(k), msg_(std::move(m)) {}

  kind kind_ = kind::tau;
  message msg_;
};

using io_fsa = automaton<io_label>;

io_label io_of(const action_label& l);
io_fsa io_projection(const machine& m);
io_label dual_label(const io_label& l);

using state_pair = std::pair<state_id, state_id>;

struct io_correspondence {
  std::set<state_pair> pairs;

  bool contains(const state_id& q, const state_id& r) const {
    return pairs.count({q, r}) != 0;
  }
  bool operator==(const io_correspondence&) const = default;
};

/// Largest relation satisfying the five correspondence clauses, computed by
/// deleting violating pairs from the full product until nothing changes.
io_correspondence greatest_io_correspondence(const machine& m1,
                                             const machine& m2);

struct compatibility_result {
  bool compatible = false;
  io_correspondence relation;
};

compatibility_result check_compatibility(const machine& m1, const machine& m2);

/// Clause-by-clause check of an arbitrary relation, one message per failing
/// (pair, clause). Empty iff `r` is an io-correspondence.
std::vector<std::string> correspondence_violations(const machine& m1,
                                                   const machine& m2,
                                                   const io_correspondence& r);

} // namespace cfsm
