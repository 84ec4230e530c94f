#include "cfsm/fuzz.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <thread>

#include "cfsm/io.hpp"
#include "json.hpp"

namespace cfsm {

void fuzz_params::validate() const {
  if (max_states == 0 || max_participants == 0 || messages == 0 ||
      iterations == 0 || premise_attempts == 0 || max_configurations == 0)
    throw error(errc::precondition_violation, "fuzz bounds must be >= 1");
  if (terminal_bias + input_bias > 100 || dual_bias > 100)
    throw error(errc::precondition_violation, "biases exceed 100%");
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Portable bounded draw; std distributions differ between libraries.
std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(rng() % n);
}

std::vector<std::size_t> pick_distinct(std::mt19937_64& rng, std::size_t n,
                                       std::size_t k) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < k && i < n; ++i)
    std::swap(all[i], all[i + below(rng, n - i)]);
  all.resize(std::min(k, n));
  return all;
}

std::vector<participant> named(const std::string& prefix, std::size_t n) {
  std::vector<participant> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({prefix + std::to_string(i)});
  return out;
}

} // namespace

machine random_machine(std::mt19937_64& rng, const fuzz_params& params,
                       const participant& owner,
                       const std::vector<participant>& partners,
                       bool sequential) {
  const std::size_t n = 1 + below(rng, params.max_states);
  std::size_t next_fresh = n;
  std::vector<transition> ts;
  for (std::size_t i = 0; i < n; ++i) {
    if (partners.empty()) break;
    auto roll = below(rng, 100);
    // the initial state never terminates, so machines do something
    if (i == 0) roll = params.terminal_bias + below(rng, 100 - params.terminal_bias);
    if (roll < params.terminal_bias) continue;
    const bool inputs = roll < params.terminal_bias + params.input_bias;
    const std::size_t k =
        sequential ? 1 : 1 + below(rng, std::min<std::size_t>(2, params.messages));
    for (auto mi : pick_distinct(rng, params.messages, k)) {
      message msg{"m" + std::to_string(mi)};
      const auto& other = partners[below(rng, partners.size())];
      state_id src = std::to_string(i);
      state_id tgt = std::to_string(below(rng, n));
      if (inputs) {
        ts.push_back({src, action_label::input(other, owner, msg), tgt});
      } else {
        state_id q = std::to_string(next_fresh++);
        ts.push_back({src, action_label::tau(), q});
        ts.push_back({q, action_label::output(owner, other, msg), tgt});
      }
    }
  }
  std::set<state_id> states;
  for (std::size_t i = 0; i < n; ++i) states.insert(std::to_string(i));
  return validate_cfsm(fsa("0", std::move(ts), std::move(states)), owner);
}

system random_system(std::mt19937_64& rng, const fuzz_params& params,
                     const std::vector<participant>& domain,
                     const std::string& name) {
  std::map<participant, machine> ms;
  for (const auto& p : domain) {
    std::vector<participant> partners;
    for (const auto& q : domain)
      if (q != p) partners.push_back(q);
    ms.emplace(p, random_machine(rng, params, p, partners));
  }
  return validate_system(std::move(ms), name);
}

system random_system(const fuzz_params& params) {
  params.validate();
  std::mt19937_64 rng(splitmix(params.seed));
  const auto n = 1 + below(rng, params.max_participants);
  std::vector<participant> domain;
  for (std::size_t i = 0; i < n; ++i)
    domain.push_back({std::string(1, static_cast<char>('A' + i % 26)) +
                      (i >= 26 ? std::to_string(i / 26) : "")});
  return random_system(rng, params, domain, "S");
}

namespace {

machine dualize(const machine& m, const participant& owner,
                const std::vector<participant>& partners) {
  const auto& g = m.graph();
  std::set<state_id> committed;
  for (const auto& t : g.transitions())
    if (t.label.is_tau()) committed.insert(t.target);
  std::set<state_id> states;
  for (const auto& q : g.states())
    if (!committed.count(q) || q == g.initial()) states.insert(q);

  std::set<state_id> taken = g.states();
  auto fresh = [&](std::string base) {
    while (taken.count(base)) base += '\'';
    taken.insert(base);
    return base;
  };

  std::size_t turn = 0;
  auto next_partner = [&] { return partners[turn++ % partners.size()]; };
  std::vector<transition> ts;
  for (const auto& t : g.transitions()) {
    if (t.label.is_tau()) {
      auto [b, e] = g.outgoing_range(t.target);
      for (auto o = b; o != e; ++o)
        ts.push_back({t.source,
                      action_label::input(next_partner(), owner, o->label.msg()),
                      o->target});
    } else if (t.label.is_input()) {
      auto mid = fresh(t.source + "_" + t.target);
      ts.push_back({t.source, action_label::tau(), mid});
      ts.push_back({mid, action_label::output(owner, next_partner(), t.label.msg()),
                    t.target});
    }
  }
  return validate_cfsm(fsa(g.initial(), std::move(ts), states), owner);
}

} // namespace

machine derive_compatible_peer(const machine& m, const participant& owner,
                               const std::vector<participant>& partners) {
  if (partners.empty())
    throw error(errc::precondition_violation, "no partners for derived peer");
  for (const auto& p : partners)
    if (p == owner || p == m.subject() || m.partners().count(p))
      throw error(errc::precondition_violation,
                  "partner " + p.name + " clashes with the machine's names");
  auto peer = dualize(m, owner, partners);
  if (!check_compatibility(m, peer).compatible)
    throw error(errc::assertion_failure,
                "derived peer of " + m.subject().name + " is not compatible");
  return peer;
}

std::size_t fuzz_report::count(std::string_view theorem) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(),
                    [&](const auto& v) { return v.theorem == theorem; }));
}

namespace {

struct iteration_result {
  fuzz_stats stats;
  std::vector<fuzz_violation> violations;
};

struct premises {
  bool df, lf, slf;
};

premises check_all(const system& s, const sem_lts& lts) {
  return {find_deadlocks(s, lts, 1).holds, find_locks(s, lts, 1).holds,
          check_strong_lock_freedom(s, lts, 1).holds};
}

iteration_result run_iteration(const fuzz_params& params, std::size_t it) {
  iteration_result res;
  auto& st = res.stats;
  st.iterations = 1;
  std::mt19937_64 rng(splitmix(params.seed ^ splitmix(it)));

  const participant h{"H"}, k{"K"};
  const std::size_t others =
      1 + below(rng, std::max<std::size_t>(1, params.max_participants - 1));
  const auto left_others = named("L", others);
  const auto right_others =
      named("R", 1 + below(rng, std::max<std::size_t>(
                                     1, params.max_participants - 1)));

  auto record = [&](std::string theorem, const system& s1, const system& s2,
                    std::string witness) {
    res.violations.push_back({it, std::move(theorem), serialize_system(s1),
                              serialize_system(s2), h.name, k.name,
                              std::move(witness)});
  };

  try {
    // each component is drawn several times, keeping the candidate that
    // satisfies the strongest premise (SLF => LF => DF)
    // In dual mode the component is the gateway machine plus a single
    // partner running its exact dual.
    auto draw = [&](const participant& gw, std::optional<machine> fixed,
                    std::vector<participant> rest, const std::string& name,
                    bool dual) {
      if (dual) rest.resize(1);
      std::optional<system> best;
      std::optional<sem_lts> best_lts;
      int best_score = -1;
      for (std::size_t a = 0; a < params.premise_attempts && best_score < 3;
           ++a) {
        std::map<participant, machine> ms;
        auto gm = fixed ? *fixed
                        : random_machine(rng, params, gw, rest,
                                         params.require_sequential_gateways);
        ms.emplace(gw, gm);
        for (const auto& p : rest) {
          if (dual) {
            ms.emplace(p, dualize(gm, p, {gw}));
            continue;
          }
          std::vector<participant> partners{gw};
          for (const auto& q : rest)
            if (q != p) partners.push_back(q);
          ms.emplace(p, random_machine(rng, params, p, partners));
        }
        auto sys = validate_system(std::move(ms), name);
        auto lts = build_semantics(sys, params.max_configurations);
        auto p = check_all(sys, lts);
        int score = p.slf ? 3 : p.lf ? 2 : p.df ? 1 : 0;
        if (score > best_score) {
          best_score = score;
          best.emplace(std::move(sys));
          best_lts.emplace(std::move(lts));
        }
      }
      return std::make_pair(std::move(*best), std::move(*best_lts));
    };

    const bool left_dual = below(rng, 100) < params.dual_bias;
    const bool right_dual = below(rng, 100) < params.dual_bias;
    auto [s1v, l1v] = draw(h, std::nullopt, left_others, "S1", left_dual);
    const system* s1 = &s1v;
    const sem_lts* l1 = &l1v;
    const auto mk = derive_compatible_peer(
        s1->at(h), k,
        right_dual ? std::vector<participant>{right_others.front()}
                   : right_others);
    auto [s2v, l2v] = draw(k, mk, right_others, "S2", right_dual);
    const system* s2 = &s2v;
    const sem_lts* l2 = &l2v;

    for (const auto* side : {s1, s2}) {
      const auto& lts = side == s1 ? *l1 : *l2;
      try {
        check_implication_chain(*side, lts);
      } catch (const error& e) {
        record("implication-chain", *s1, *s2, e.what());
      }
    }

    auto report = check_composability(*s1, h, *s2, k);
    if (!report.composable) return res;
    ++st.composable;

    const auto p1 = check_all(*s1, *l1);
    const auto p2 = check_all(*s2, *l2);
    st.left_deadlock_free += p1.df;
    st.right_deadlock_free += p2.df;

    auto cs = compose_systems(*s1, h, *s2, k);
    auto lts = build_semantics(cs.sys, params.max_configurations);
    st.composed_configurations += lts.size();

    try {
      check_implication_chain(cs.sys, lts);
    } catch (const error& e) {
      record("implication-chain", *s1, *s2, e.what());
    }

    const bool sequential = report.h_profile.sequential &&
                            report.k_profile.sequential;
    st.sequential_pairs += sequential;

    auto first_witness = [](const property_report& r) {
      if (r.witnesses.empty()) return std::string{};
      const auto& w = r.witnesses.front();
      return std::string(to_string(w.kind)) + " at " + to_string(w.config) +
             (w.who ? " for " + w.who->name : "");
    };

    if (p1.df && p2.df) {
      ++st.deadlock_premise;
      auto r = find_deadlocks(cs.sys, lts, 1);
      if (!r.holds) record("deadlock-freedom", *s1, *s2, first_witness(r));
    }
    if (p1.lf && p2.lf && sequential) {
      ++st.lock_premise;
      auto r = find_locks(cs.sys, lts, 1);
      if (!r.holds) record("lock-freedom", *s1, *s2, first_witness(r));
    }
    if (p1.slf && p2.slf) {
      ++st.strong_lock_premise;
      auto r = check_strong_lock_freedom(cs.sys, lts, 1);
      if (!r.holds) record("strong-lock-freedom", *s1, *s2, first_witness(r));
    }

    auto pl = verify_projection_lemma(cs, lts);
    st.projection_checked += pl.checked;
    if (!pl.holds)
      record("projection", *s1, *s2,
             pl.counterexamples.front().clause + " at " +
                 to_string(pl.counterexamples.front().config));
  } catch (const error& e) {
    if (e.code() != errc::state_explosion_limit) throw;
    ++st.skipped;
  }
  return res;
}

void accumulate(fuzz_stats& into, const fuzz_stats& s) {
  into.iterations += s.iterations;
  into.composable += s.composable;
  into.skipped += s.skipped;
  into.left_deadlock_free += s.left_deadlock_free;
  into.right_deadlock_free += s.right_deadlock_free;
  into.deadlock_premise += s.deadlock_premise;
  into.lock_premise += s.lock_premise;
  into.strong_lock_premise += s.strong_lock_premise;
  into.sequential_pairs += s.sequential_pairs;
  into.projection_checked += s.projection_checked;
  into.composed_configurations += s.composed_configurations;
}

} // namespace

fuzz_report run_preservation_fuzz(const fuzz_params& params) {
  params.validate();
  std::size_t threads = params.threads ? params.threads
                                       : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, params.iterations);

  std::vector<iteration_result> results(params.iterations);
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t it = w; it < params.iterations; it += threads)
        results[it] = run_iteration(params, it);
    }));
  for (auto& f : workers) f.get();

  fuzz_report report;
  report.params = params;
  for (auto& r : results) {
    accumulate(report.stats, r.stats);
    for (auto& v : r.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

std::string fuzz_report_to_json(const fuzz_report& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  const auto& p = r.params;
  doc["params"] = {{"seed", p.seed},
                   {"max_states", p.max_states},
                   {"max_participants", p.max_participants},
                   {"messages", p.messages},
                   {"iterations", p.iterations},
                   {"require_sequential_gateways", p.require_sequential_gateways}};
  const auto& s = r.stats;
  doc["stats"] = {{"iterations", s.iterations},
                  {"composable", s.composable},
                  {"skipped", s.skipped},
                  {"left_deadlock_free", s.left_deadlock_free},
                  {"right_deadlock_free", s.right_deadlock_free},
                  {"deadlock_premise", s.deadlock_premise},
                  {"lock_premise", s.lock_premise},
                  {"strong_lock_premise", s.strong_lock_premise},
                  {"sequential_pairs", s.sequential_pairs},
                  {"projection_checked", s.projection_checked},
                  {"composed_configurations", s.composed_configurations}};
  auto vs = ordered_json::array();
  for (const auto& v : r.violations)
    vs.push_back({{"iteration", v.iteration},
                  {"theorem", v.theorem},
                  {"h", v.h},
                  {"k", v.k},
                  {"witness", v.witness},
                  {"left", v.left},
                  {"right", v.right}});
  doc["violations"] = std::move(vs);
  return doc.dump(2) + "\n";
}

} // namespace cfsm
