#include "support.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#ifndef CFSM_FIXTURE_DIR
#error "CFSM_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace cfsm::test {

std::string fixture_path(const std::string& name) {
  return std::string(CFSM_FIXTURE_DIR) + "/" + name;
}

system load(const std::string& name) {
  return read_system_file(fixture_path(name));
}

raw_system load_raw(const std::string& name) {
  return parse_raw_system(read_text_file(fixture_path(name)));
}

machine raw_machine_of(const std::string& name, const std::string& p) {
  for (const auto& m : load_raw(name).machines)
    if (m.owner.name == p) return validate_cfsm(m.graph, m.owner);
  throw std::runtime_error("no machine " + p + " in " + name);
}

machine machine_from(const std::string& owner, const std::string& body) {
  auto raw = parse_raw_system("system t\nmachine " + owner + " {\n" + body +
                              "\n}\n");
  return validate_cfsm(raw.machines.front().graph, raw.machines.front().owner);
}

std::vector<std::string> fixture_names() {
  return {"ex_sem.sys",       "ex_gc_s1.sys",     "ex_dlfree_s1.sys",
          "ex_dlfree_s2.sys", "incompat_s1.sys",  "incompat_s2.sys",
          "mixed_s1.sys",     "mixed_s2.sys",     "lfcex_s1.sys",
          "lfcex_s2.sys"};
}

std::vector<naive_step> naive_steps(const system& sys,
                                    const configuration& s) {
  std::vector<naive_step> out;
  for (const auto& [a, ma] : sys.machines()) {
    for (const auto& t : ma.transitions()) {
      if (t.source != s.at(a)) continue;
      if (t.label.is_tau()) {
        auto next = s;
        next[a] = t.target;
        out.push_back({sem_label::tau(a), next});
      } else if (t.label.is_output()) {
        const auto& b = t.label.receiver();
        for (const auto& u : sys.at(b).transitions()) {
          if (u.source != s.at(b)) continue;
          if (u.label != action_label::input(a, b, t.label.msg())) continue;
          auto next = s;
          next[a] = t.target;
          next[b] = u.target;
          out.push_back({sem_label::interaction(a, b, t.label.msg()), next});
        }
      }
    }
  }
  return out;
}

std::set<configuration> naive_reachable(const system& sys) {
  std::set<configuration> seen{initial_configuration(sys)};
  std::vector<configuration> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    auto c = todo.back();
    todo.pop_back();
    for (auto& st : naive_steps(sys, c))
      if (seen.insert(st.target).second) todo.push_back(st.target);
  }
  return seen;
}

sem_label label_of(const std::string& s) {
  if (s.rfind("tau(", 0) == 0 && s.back() == ')')
    return sem_label::tau({s.substr(4, s.size() - 5)});
  auto arrow = s.find("->");
  auto colon = s.find(':');
  if (arrow == std::string::npos || colon == std::string::npos)
    throw std::invalid_argument("bad label " + s);
  return sem_label::interaction({s.substr(0, arrow)},
                                {s.substr(arrow + 2, colon - arrow - 2)},
                                {s.substr(colon + 1)});
}

std::vector<sem_label> labels_of(const std::vector<std::string>& ss) {
  std::vector<sem_label> out;
  for (const auto& s : ss) out.push_back(label_of(s));
  return out;
}

std::optional<std::vector<configuration>> replay(
    const system& sys, const sem_lts& lts, const configuration& from,
    const std::vector<sem_label>& run,
    const std::optional<configuration>& end) {
  (void)sys;
  std::vector<configuration> trace{from};
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == run.size()) return !end || trace.back() == *end;
    auto idx = lts.index_of(trace.back());
    if (!idx) return false;
    for (const auto& e : lts.out_edges(*idx)) {
      if (e.label != run[i]) continue;
      trace.push_back(lts.config(e.target));
      if (go(i + 1)) return true;
      trace.pop_back();
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return trace;
}

namespace {

bool locally_enabled(const system& sys, const configuration& c,
                     const participant& a) {
  for (const auto& t : sys.at(a).transitions())
    if (t.source == c.at(a)) return true;
  return false;
}

} // namespace

bool oracle_locked(const system& sys, const sem_lts& lts, std::size_t s,
                   const participant& a) {
  if (!locally_enabled(sys, lts.config(s), a)) return false;
  // every reachable edge ends some simple path from s, so enumerating
  // simple paths sees all of them
  std::vector<bool> on_path(lts.size(), false);
  std::function<bool(std::size_t)> involved = [&](std::size_t c) {
    on_path[c] = true;
    bool found = false;
    for (const auto& e : lts.out_edges(c)) {
      if (participants_of(e.label).count(a)) {
        found = true;
        break;
      }
      if (!on_path[e.target] && involved(e.target)) {
        found = true;
        break;
      }
    }
    on_path[c] = false;
    return found;
  };
  return !involved(s);
}

bool oracle_slf_violated(const system& sys, const sem_lts& lts, std::size_t s,
                         const participant& a) {
  if (!locally_enabled(sys, lts.config(s), a)) return false;
  std::vector<bool> on_path(lts.size(), false);
  std::function<bool(std::size_t)> escape = [&](std::size_t c) {
    if (lts.out_edges(c).empty()) return true; // finite maximal run
    on_path[c] = true;
    bool found = false;
    for (const auto& e : lts.out_edges(c)) {
      if (participants_of(e.label).count(a)) continue;
      if (on_path[e.target] || escape(e.target)) { // repeat: infinite run
        found = true;
        break;
      }
    }
    on_path[c] = false;
    return found;
  };
  return escape(s);
}

bool oracle_is_correspondence(const machine& m1, const machine& m2,
                              const std::set<state_pair>& r) {
  auto outgoing = [](const machine& m, const state_id& q) {
    std::vector<transition> out;
    for (const auto& t : m.transitions())
      if (t.source == q) out.push_back(t);
    return out;
  };
  for (const auto& [q, p] : r) {
    auto oq = outgoing(m1, q), op = outgoing(m2, p);
    if (oq.empty() != op.empty()) return false;
    for (const auto& t : oq) {
      if (t.label.is_output()) {
        bool ok = false;
        for (const auto& u : op)
          ok |= u.label.is_input() && u.label.msg() == t.label.msg() &&
                r.count({t.target, u.target});
        if (!ok) return false;
      }
      if (t.label.is_tau() && !r.count({t.target, p})) return false;
    }
    for (const auto& u : op) {
      if (u.label.is_output()) {
        bool ok = false;
        for (const auto& t : oq)
          ok |= t.label.is_input() && t.label.msg() == u.label.msg() &&
                r.count({t.target, u.target});
        if (!ok) return false;
      }
      if (u.label.is_tau() && !r.count({q, u.target})) return false;
    }
  }
  return true;
}

std::set<state_pair> oracle_greatest_correspondence(const machine& m1,
                                                    const machine& m2) {
  if (m1.states().size() > 4 || m2.states().size() > 4)
    throw std::invalid_argument("relation enumeration limited to 4x4 states");
  std::vector<state_pair> all;
  for (const auto& q : m1.states())
    for (const auto& p : m2.states()) all.emplace_back(q, p);
  std::set<state_pair> greatest;
  for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
    std::set<state_pair> r;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask & (1u << i)) r.insert(all[i]);
    if (oracle_is_correspondence(m1, m2, r))
      greatest.insert(r.begin(), r.end());
  }
  return greatest;
}

configuration rename(
    const configuration& c,
    const std::map<participant, std::map<state_id, state_id>>& r) {
  configuration out;
  for (const auto& [p, q] : c) {
    auto it = r.find(p);
    if (it == r.end()) {
      out.emplace(p, q);
      continue;
    }
    auto jt = it->second.find(q);
    out.emplace(p, jt == it->second.end() ? q : jt->second);
  }
  return out;
}

} // namespace cfsm::test
