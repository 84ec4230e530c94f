#include "cfsm/machine.hpp"

#include <map>
#include <tuple>

namespace cfsm {

std::set<participant> machine::partners() const {
  std::set<participant> out;
  for (const auto& t : fsa_.transitions())
    if (!t.label.is_tau()) out.insert(t.label.partner());
  return out;
}

std::vector<diagnostic> cfsm_violations(const fsa& f,
                                        const participant& subject,
                                        const transition_locator& where) {
  std::map<state_id, std::vector<const transition*>> incoming;
  for (const auto& t : f.transitions()) incoming[t.target].push_back(&t);

  std::vector<diagnostic> out;
  auto report = [&](errc code, const transition& t, const std::string& why) {
    diagnostic d{code, to_string(t) + ": " + why};
    if (where) std::tie(d.line, d.column) = where(t);
    out.push_back(std::move(d));
  };

  for (const auto& t : f.transitions()) {
    if (!t.label.is_tau() && t.label.subject() != subject)
      report(errc::non_local_label, t,
             "label subject is not " + subject.name);

    if (t.label.is_output()) {
      if (t.source == t.target)
        report(errc::self_loop_on_tau_or_output, t, "output self-loop");
      const auto& in = incoming[t.source];
      if (in.size() > 1)
        report(errc::multiple_incoming_to_output_source, t,
               "output source has " + std::to_string(in.size()) +
                   " incoming transitions");
      else if (in.empty() || !in.front()->label.is_tau())
        report(errc::output_without_tau_guard, t,
               "output source is not entered by a single tau");
    } else if (t.label.is_tau()) {
      if (t.source == t.target)
        report(errc::self_loop_on_tau_or_output, t, "tau self-loop");
      auto [b, e] = f.outgoing_range(t.target);
      if (e - b != 1 || !b->label.is_output())
        report(errc::tau_target_not_unique_output, t,
               "tau target must have exactly one outgoing output");
    }
  }
  return out;
}

machine validate_cfsm(fsa f, participant subject) {
  auto violations = cfsm_violations(f, subject);
  if (!violations.empty()) throw error(std::move(violations));
  return machine(std::move(f), std::move(subject));
}

state_class classify_state(const machine& m, const state_id& q) {
  if (!m.contains(q))
    throw error(errc::unknown_state, "unknown state '" + q + "'");
  bool tau = false, out = false, in = false;
  auto [b, e] = m.graph().outgoing_range(q);
  for (auto it = b; it != e; ++it) {
    tau |= it->label.is_tau();
    out |= it->label.is_output();
    in |= it->label.is_input();
  }
  state_class c;
  c.terminal = b == e;
  if (c.terminal) return c;
  c.sending = out && !tau && !in;
  c.receiving = in && !tau && !out;
  c.mixed = !c.sending && !c.receiving;
  c.asymmetric_sending = !in;
  c.asymmetric_receiving = in && !tau && !out;
  c.asymmetric_mixed = !c.asymmetric_sending && !c.asymmetric_receiving;
  return c;
}

machine_profile profile(const machine& m) {
  machine_profile p;
  const auto& g = m.graph();
  for (const auto& q : g.states()) {
    auto [b, e] = g.outgoing_range(q);
    if (b == e) p.terminal_states.insert(q);
    if (e - b > 1) p.sequential = false;
    if (classify_state(m, q).asymmetric_mixed) p.has_asymmetric_mixed = true;

    std::map<message, state_id> input_target;
    std::map<message, state_id> output_target;
    for (auto it = b; it != e; ++it) {
      if (it->label.is_input()) {
        auto [pos, fresh] = input_target.emplace(it->label.msg(), it->target);
        if (!fresh && pos->second != it->target) p.in_deterministic = false;
      } else if (it->label.is_tau()) {
        // tau targets have exactly one outgoing transition, an output
        auto [ob, oe] = g.outgoing_range(it->target);
        for (auto o = ob; o != oe; ++o) {
          if (!o->label.is_output()) continue;
          auto [pos, fresh] = output_target.emplace(o->label.msg(), o->target);
          if (!fresh && pos->second != o->target) p.out_deterministic = false;
        }
      }
    }
  }
  return p;
}

machine normalize_outputs(const fsa& f, const participant& subject) {
  std::vector<diagnostic> problems;
  for (const auto& t : f.transitions()) {
    if (t.label.is_tau())
      problems.push_back({errc::precondition_violation,
                          to_string(t) + ": input automaton has tau"});
    else if (t.label.subject() != subject)
      problems.push_back({errc::non_local_label,
                          to_string(t) + ": label subject is not " +
                              subject.name});
    else if (t.label.is_output() && t.source == t.target)
      problems.push_back(
          {errc::self_loop_on_tau_or_output, to_string(t) + ": output self-loop"});
  }
  if (!problems.empty()) throw error(std::move(problems));

  std::set<state_id> taken = f.states();
  auto fresh = [&](std::string base) {
    while (taken.count(base)) base += '\'';
    taken.insert(base);
    return base;
  };

  std::vector<transition> out;
  std::map<state_id, int> counter;
  // transitions() is sorted by (source, label, target): numbering follows
  // label order within each source
  for (const auto& t : f.transitions()) {
    if (!t.label.is_output()) {
      out.push_back(t);
      continue;
    }
    auto mid = fresh(t.source + "#out" + std::to_string(counter[t.source]++));
    out.push_back({t.source, action_label::tau(), mid});
    out.push_back({mid, t.label, t.target});
  }
  return validate_cfsm(fsa(f.initial(), std::move(out), f.states()), subject);
}

} // namespace cfsm
