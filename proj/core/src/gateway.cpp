#include "cfsm/gateway.hpp"

#include <algorithm>

namespace cfsm {

namespace {

// Target of the unique output leaving the committed state q.
const transition& committed_output(const machine& m, const state_id& q) {
  auto [b, e] = m.graph().outgoing_range(q);
  if (e - b != 1 || !b->label.is_output())
    throw error(errc::internal_inconsistency,
                "state " + q + " is not followed by a single output");
  return *b;
}

void check_tau_fact(const machine& m) {
  std::map<state_id, int> in, out;
  for (const auto& t : m.transitions())
    if (t.label.is_tau()) {
      ++out[t.source];
      ++in[t.target];
    }
  for (const auto& q : m.states())
    if (in[q] + out[q] > 1)
      throw error(errc::internal_inconsistency,
                  "gateway state " + q + " has more than one tau transition");
}

} // namespace

gateway build_gateway(const machine& m, const participant& peer) {
  const auto& owner = m.subject();
  if (peer == owner)
    throw error(errc::peer_name_clash, "peer " + peer.name + " owns the machine");
  if (m.partners().count(peer))
    throw error(errc::peer_name_clash,
                "peer " + peer.name + " already occurs in the machine of " +
                    owner.name);

  std::set<state_id> taken = m.states();
  auto fresh = [&](std::string base) {
    while (taken.count(base)) base += '\'';
    taken.insert(base);
    return base;
  };

  std::vector<transition> ts;
  std::map<state_id, fresh_origin> prov;
  for (const auto& t : m.transitions()) {
    if (t.label.is_output()) {
      ts.push_back(t);
    } else if (t.label.is_tau()) {
      const auto& o = committed_output(m, t.target);
      auto p1 = fresh(t.source + ">" + t.target);
      ts.push_back({t.source, action_label::input(peer, owner, o.label.msg()), p1});
      ts.push_back({p1, action_label::tau(), t.target});
      prov.emplace(p1, fresh_origin{fresh_origin::role::peer_input, t});
    } else {
      auto p1 = fresh(t.source + "?" + t.target);
      auto p2 = fresh(t.source + "!" + t.target);
      ts.push_back({t.source, t.label, p1});
      ts.push_back({p1, action_label::tau(), p2});
      ts.push_back({p2, action_label::output(owner, peer, t.label.msg()), t.target});
      prov.emplace(p1, fresh_origin{fresh_origin::role::own_input, t});
      prov.emplace(p2, fresh_origin{fresh_origin::role::peer_output, t});
    }
  }

  machine built = [&] {
    try {
      return validate_cfsm(fsa(m.initial(), std::move(ts), m.states()), owner);
    } catch (const error& e) {
      throw error(errc::invalid_input_machine,
                  "gateway of " + owner.name + " is not a CFSM: " + e.what());
    }
  }();
  check_tau_fact(built);

  gateway gw(std::move(built), m, peer);
  gw.external_ = m.states();
  for (const auto& [q, _] : prov) gw.internal_.insert(q);
  gw.provenance_ = std::move(prov);
  return gw;
}

state_id nof_state(const gateway& gw, const state_id& q) {
  if (!gw.cfsm().contains(q))
    throw error(errc::unknown_state, "unknown gateway state '" + q + "'");
  const auto& orig = gw.original();
  auto it = gw.provenance().find(q);
  if (it == gw.provenance().end()) {
    // a committed original state is only reachable after the peer input
    // that announced its output, so it reflects the post-output state
    auto [b, e] = orig.graph().outgoing_range(q);
    if (e - b == 1 && b->label.is_output())
      return b->target;
    return q;
  }
  const auto& o = it->second;
  switch (o.kind) {
  case fresh_origin::role::peer_input:
    return committed_output(orig, o.origin.target).target;
  case fresh_origin::role::own_input:
  case fresh_origin::role::peer_output:
    return o.origin.source;
  }
  return q;
}

bool composability_report::has_issue(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const auto& i) { return i.code == code; });
}

composability_report check_composability(const system& s1,
                                         const participant& h,
                                         const system& s2,
                                         const participant& k) {
  const auto& mh = s1.at(h);
  const auto& mk = s2.at(k);
  composability_report r;

  std::vector<std::string> shared;
  for (const auto& [p, _] : s1.machines())
    if (s2.contains(p)) shared.push_back(p.name);
  r.disjoint_domains = shared.empty();
  if (!r.disjoint_domains) {
    std::string names;
    for (const auto& n : shared) names += (names.empty() ? "" : ", ") + n;
    r.issues.push_back({"domain-overlap", "shared participants: " + names});
  }

  r.h_profile = profile(mh);
  r.k_profile = profile(mk);
  r.compatible = check_compatibility(mh, mk).compatible;
  if (!r.compatible)
    r.issues.push_back({"not-compatible", h.name + " and " + k.name +
                                              " are not compatible"});
  for (const auto* side : {&h, &k}) {
    const auto& prof = side == &h ? r.h_profile : r.k_profile;
    if (!prof.in_deterministic)
      r.issues.push_back({"not-in-deterministic",
                          side->name + " is not ?-deterministic"});
    if (!prof.out_deterministic)
      r.issues.push_back({"not-out-deterministic",
                          side->name + " is not !-deterministic"});
    if (prof.has_asymmetric_mixed)
      r.issues.push_back({"asymmetric-mixed",
                          side->name + " has asymmetric mixed states"});
  }
  r.composable = r.issues.empty();
  return r;
}

composed_system compose_systems(const system& s1, const participant& h,
                                const system& s2, const participant& k,
                                bool force) {
  auto report = check_composability(s1, h, s2, k);
  if (!report.disjoint_domains)
    throw error(errc::domain_overlap, report.issues.front().detail);
  if (!report.composable && !force) {
    std::vector<diagnostic> ds;
    for (const auto& i : report.issues)
      ds.push_back({errc::not_composable, i.code + ": " + i.detail});
    throw error(std::move(ds));
  }

  auto gh = build_gateway(s1.at(h), k);
  auto gk = build_gateway(s2.at(k), h);
  std::map<participant, machine> ms;
  for (const auto& [p, m] : s1.machines())
    ms.emplace(p, p == h ? gh.cfsm() : m);
  for (const auto& [p, m] : s2.machines())
    ms.emplace(p, p == k ? gk.cfsm() : m);
  auto sys = validate_system(std::move(ms),
                             s1.name() + "_" + h.name + "_" + k.name + "_" +
                                 s2.name());
  return composed_system{std::move(sys), s1, s2, h, k, std::move(gh),
                         std::move(gk), force, std::move(report)};
}

configuration project_configuration(const composed_system& cs,
                                    const configuration& s, side which) {
  if (s.size() != cs.sys.machines().size())
    throw error(errc::foreign_configuration,
                to_string(s) + " is not a configuration of " + cs.sys.name());
  for (const auto& [p, q] : s)
    if (!cs.sys.contains(p) || !cs.sys.at(p).contains(q))
      throw error(errc::foreign_configuration,
                  to_string(s) + " is not a configuration of " + cs.sys.name());

  const auto& comp = which == side::left ? cs.left : cs.right;
  const auto& gw = which == side::left ? cs.left_gateway : cs.right_gateway;
  configuration out;
  for (const auto& [p, _] : comp.machines()) {
    const auto& q = s.at(p);
    if (p != gw.owner()) {
      out.emplace(p, q);
      continue;
    }
    auto it = gw.provenance().find(q);
    if (it == gw.provenance().end()) {
      out.emplace(p, q);
    } else if (it->second.kind == fresh_origin::role::peer_input) {
      out.emplace(p, it->second.origin.source);
    } else {
      out.emplace(p, it->second.origin.target);
    }
  }
  return out;
}

projection_check verify_projection_lemma(const composed_system& cs,
                                         const sem_lts& lts) {
  auto left = build_semantics(cs.left);
  auto right = build_semantics(cs.right);
  auto rel = greatest_io_correspondence(cs.left.at(cs.h), cs.right.at(cs.k));

  projection_check res;
  for (const auto& s : lts.configurations()) {
    ++res.checked;
    if (!left.index_of(project_configuration(cs, s, side::left)))
      res.counterexamples.push_back({s, "left-projection"});
    if (!right.index_of(project_configuration(cs, s, side::right)))
      res.counterexamples.push_back({s, "right-projection"});
    auto nh = nof_state(cs.left_gateway, s.at(cs.h));
    auto nk = nof_state(cs.right_gateway, s.at(cs.k));
    if (!rel.contains(nh, nk))
      res.counterexamples.push_back({s, "nof-correspondence"});
  }
  res.holds = res.counterexamples.empty();
  return res;
}

} // namespace cfsm
