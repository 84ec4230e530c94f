#include "cfsm/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace cfsm {

const machine& system::at(const participant& p) const {
  auto it = machines_.find(p);
  if (it == machines_.end())
    throw error(errc::unknown_participant,
                "no participant '" + p.name + "' in system " + name_);
  return it->second;
}

std::vector<participant> system::participants() const {
  std::vector<participant> out;
  out.reserve(machines_.size());
  for (const auto& [p, _] : machines_) out.push_back(p);
  return out;
}

system validate_system(std::map<participant, machine> machines,
                       std::string name, const system_locator& where) {
  if (machines.empty())
    throw error(errc::empty_system, "a system needs at least one machine");
  std::vector<diagnostic> problems;
  for (const auto& [p, m] : machines) {
    if (m.subject() != p)
      problems.push_back({errc::non_local_machine,
                          "machine of " + m.subject().name +
                              " assigned to participant " + p.name});
    for (const auto& t : m.transitions()) {
      if (t.label.is_tau()) continue;
      for (const auto* q : {&t.label.sender(), &t.label.receiver()})
        if (!machines.count(*q)) {
          diagnostic d{errc::dangling_participant,
                       p.name + ": " + to_string(t) + " names " + q->name +
                           " outside the system"};
          if (where) std::tie(d.line, d.column) = where(p, t);
          problems.push_back(std::move(d));
        }
    }
  }
  if (!problems.empty()) throw error(std::move(problems));
  return system(std::move(name), std::move(machines));
}

std::string to_string(const configuration& c) {
  std::string out = "(";
  bool first = true;
  for (const auto& [p, q] : c) {
    if (!first) out += ", ";
    first = false;
    out += p.name + "=" + q;
  }
  return out + ")";
}

sem_label sem_label::interaction(participant sender, participant receiver,
                                 message msg) {
  if (sender == receiver)
    throw error(errc::invalid_label, "interaction of " + sender.name +
                                         " with itself");
  sem_label l;
  l.kind_ = kind::interaction;
  l.sender_ = std::move(sender);
  l.receiver_ = std::move(receiver);
  l.msg_ = std::move(msg);
  return l;
}

sem_label sem_label::tau(participant actor) {
  sem_label l;
  l.kind_ = kind::tau;
  l.sender_ = std::move(actor);
  return l;
}

std::string sem_label::str() const {
  if (kind_ == kind::tau) return "tau(" + sender_.name + ")";
  return sender_.name + "->" + receiver_.name + ":" + msg_.name;
}

std::set<participant> participants_of(const sem_label& l) {
  if (l.is_tau()) return {l.actor()};
  return {l.sender(), l.receiver()};
}

std::optional<std::size_t> sem_lts::index_of(const configuration& c) const {
  auto it = std::lower_bound(configurations_.begin(), configurations_.end(), c);
  if (it == configurations_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - configurations_.begin());
}

namespace {

using local_state = std::uint32_t;
using packed_config = std::vector<local_state>;

struct packed_hash {
  std::size_t operator()(const packed_config& c) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto v : c) {
      h ^= v;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

struct local_move {
  enum class kind { tau, output, input } type;
  std::size_t partner; // index into the participant vector
  message msg;
  local_state target;
};

// Index-based view of one machine.
struct indexed_machine {
  std::vector<state_id> names; // sorted, index = local_state
  std::vector<std::vector<local_move>> moves;
};

indexed_machine index_machine(const machine& m,
                              const std::map<participant, std::size_t>& ids) {
  indexed_machine im;
  im.names.assign(m.states().begin(), m.states().end());
  im.moves.resize(im.names.size());
  auto local = [&](const state_id& q) {
    return static_cast<local_state>(
        std::lower_bound(im.names.begin(), im.names.end(), q) -
        im.names.begin());
  };
  for (const auto& t : m.transitions()) {
    local_move mv{local_move::kind::tau, 0, {}, local(t.target)};
    if (t.label.is_output()) {
      mv.type = local_move::kind::output;
      mv.partner = ids.at(t.label.receiver());
      mv.msg = t.label.msg();
    } else if (t.label.is_input()) {
      mv.type = local_move::kind::input;
      mv.partner = ids.at(t.label.sender());
      mv.msg = t.label.msg();
    }
    im.moves[local(t.source)].push_back(std::move(mv));
  }
  return im;
}

} // namespace

sem_lts build_semantics(const system& sys, std::size_t max_configurations) {
  const auto parts = sys.participants();
  std::map<participant, std::size_t> ids;
  for (std::size_t i = 0; i < parts.size(); ++i) ids[parts[i]] = i;

  std::vector<indexed_machine> ms;
  ms.reserve(parts.size());
  for (const auto& p : parts) ms.push_back(index_machine(sys.at(p), ids));

  packed_config init(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& names = ms[i].names;
    init[i] = static_cast<local_state>(
        std::lower_bound(names.begin(), names.end(), sys.at(parts[i]).initial()) -
        names.begin());
  }

  std::vector<packed_config> configs{init};
  std::unordered_map<packed_config, std::size_t, packed_hash> seen{{init, 0}};
  struct raw_edge {
    std::size_t source;
    sem_label label;
    std::size_t target;
  };
  std::vector<raw_edge> raw;

  auto intern = [&](packed_config c) {
    auto [it, fresh] = seen.emplace(std::move(c), configs.size());
    if (fresh) {
      if (configs.size() >= max_configurations)
        throw error(errc::state_explosion_limit,
                    "more than " + std::to_string(max_configurations) +
                        " configurations in " + sys.name());
      configs.push_back(it->first);
    }
    return it->second;
  };

  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    for (std::size_t a = 0; a < parts.size(); ++a) {
      // copy: intern() may reallocate `configs`
      const packed_config cur = configs[ci];
      for (const auto& mv : ms[a].moves[cur[a]]) {
        if (mv.type == local_move::kind::tau) {
          auto next = cur;
          next[a] = mv.target;
          auto ti = intern(std::move(next));
          raw.push_back({ci, sem_label::tau(parts[a]), ti});
        } else if (mv.type == local_move::kind::output) {
          const auto b = mv.partner;
          for (const auto& in : ms[b].moves[cur[b]]) {
            if (in.type != local_move::kind::input || in.partner != a ||
                in.msg != mv.msg)
              continue;
            auto next = cur;
            next[a] = mv.target;
            next[b] = in.target;
            auto ti = intern(std::move(next));
            raw.push_back(
                {ci, sem_label::interaction(parts[a], parts[b], mv.msg), ti});
          }
        }
      }
    }
  }

  // Sort configurations by their participant -> name maps.
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  auto name_less = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& nx = ms[i].names[configs[x][i]];
      const auto& ny = ms[i].names[configs[y][i]];
      if (nx != ny) return nx < ny;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), name_less);
  std::vector<std::size_t> rank(configs.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  sem_lts lts;
  lts.participants_ = parts;
  lts.configurations_.reserve(configs.size());
  for (auto idx : order) {
    configuration c;
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.emplace(parts[i], ms[i].names[configs[idx][i]]);
    lts.configurations_.push_back(std::move(c));
  }
  lts.initial_ = rank[0];
  lts.edges_.reserve(raw.size());
  for (auto& e : raw)
    lts.edges_.push_back({rank[e.source], std::move(e.label), rank[e.target]});
  std::sort(lts.edges_.begin(), lts.edges_.end());
  lts.edges_.erase(std::unique(lts.edges_.begin(), lts.edges_.end()),
                   lts.edges_.end());
  lts.offsets_.assign(configs.size() + 1, 0);
  for (const auto& e : lts.edges_) ++lts.offsets_[e.source + 1];
  std::partial_sum(lts.offsets_.begin(), lts.offsets_.end(),
                   lts.offsets_.begin());
  return lts;
}

std::set<participant> enabled_participants(const system& sys,
                                           const configuration& s) {
  if (s.size() != sys.machines().size())
    throw error(errc::foreign_configuration,
                to_string(s) + " does not cover the domain of " + sys.name());
  std::set<participant> out;
  for (const auto& [p, q] : s) {
    if (!sys.contains(p) || !sys.at(p).contains(q))
      throw error(errc::foreign_configuration,
                  to_string(s) + " is not a configuration of " + sys.name());
    if (sys.at(p).graph().out_degree(q) > 0) out.insert(p);
  }
  return out;
}

configuration initial_configuration(const system& sys) {
  configuration c;
  for (const auto& [p, m] : sys.machines()) c.emplace(p, m.initial());
  return c;
}

} // namespace cfsm
