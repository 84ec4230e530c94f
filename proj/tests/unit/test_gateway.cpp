#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace cfsm;
using namespace cfsm::test;

namespace {

using t = fsa::transition;

composed_system compose_fixture(const std::string& prefix, bool force = false) {
  return compose_systems(load(prefix + "_s1.sys"), {"H"},
                         load(prefix + "_s2.sys"), {"K"}, force);
}

composed_system compose_gc() {
  return compose_systems(load("ex_gc_s1.sys"), {"H"}, load("ex_sem.sys"),
                         {"K"});
}

std::size_t count_kind(const machine& m, action_label::kind k) {
  std::size_t n = 0;
  for (const auto& tr : m.transitions()) n += tr.label.type() == k;
  return n;
}

} // namespace

TEST_CASE("gateway of the ex_gc H") {
  auto gw = build_gateway(load("ex_gc_s1.sys").at({"H"}), {"K"});
  auto drawn = raw_machine_of("gateways/ex_gc.sys", "H");
  CHECK(gw.cfsm().states().size() == 6);
  auto iso = find_isomorphism(gw.cfsm().graph(), drawn.graph(),
                              gw.external_states());
  REQUIRE(iso.has_value());
  CHECK(gw.external_states() == std::set<state_id>{"0", "1"});
  CHECK(gw.internal_states().size() == 4);
  CHECK(gw.owner() == participant{"H"});
  CHECK(gw.peer() == participant{"K"});
  CHECK(gw.cfsm().contains("0?1"));
  CHECK(gw.cfsm().contains("0!1"));
}

TEST_CASE("gateway of a single output segment") {
  auto m = machine_from("H", "init 0\n0 tau 1\n1 ! A m 2");
  auto gw = build_gateway(m, {"K"});
  CHECK(gw.cfsm().states().size() == 4);
  auto first = gw.cfsm().graph().outgoing_range("0");
  REQUIRE(first.second - first.first == 1);
  CHECK(first.first->label == action_label::input({"K"}, {"H"}, {"m"}));
  CHECK(gw.cfsm().graph() ==
        fsa("0", {t{"0", action_label::input({"K"}, {"H"}, {"m"}), "0>1"},
                  t{"0>1", action_label::tau(), "1"},
                  t{"1", action_label::output({"H"}, {"A"}, {"m"}), "2"}}));
  auto origin = gw.provenance().at("0>1");
  CHECK(origin.kind == fresh_origin::role::peer_input);
  CHECK(origin.origin.label.is_tau());
}

TEST_CASE("gateway of a single input") {
  auto m = machine_from("H", "init 0\n0 ? A m 1");
  auto gw = build_gateway(m, {"K"});
  CHECK(gw.cfsm().graph() ==
        fsa("0", {t{"0", action_label::input({"A"}, {"H"}, {"m"}), "0?1"},
                  t{"0?1", action_label::tau(), "0!1"},
                  t{"0!1", action_label::output({"H"}, {"K"}, {"m"}), "1"}}));
  CHECK(gw.provenance().at("0?1").kind == fresh_origin::role::own_input);
  CHECK(gw.provenance().at("0!1").kind == fresh_origin::role::peer_output);
}

TEST_CASE("fresh names avoid clashes") {
  auto m = machine_from("H", "init 0\n0 ? A m 1\n1 ? A n \"0?1\"");
  auto gw = build_gateway(m, {"K"});
  CHECK(gw.cfsm().contains("0?1'"));
  CHECK(gw.cfsm().states().size() == m.states().size() + 4);
}

TEST_CASE("gateway size and tau structure on random machines") {
  fuzz_params params;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    auto m = random_machine(rng, params, {"H"}, {{"A"}, {"B"}}, seed % 2);
    auto gw = build_gateway(m, {"K"});
    auto taus = count_kind(m, action_label::kind::tau);
    auto inputs = count_kind(m, action_label::kind::input);
    CHECK(gw.cfsm().states().size() == m.states().size() + taus + 2 * inputs);
    CHECK(gw.cfsm().transitions().size() ==
          m.transitions().size() + taus + 2 * inputs);
    CHECK(gw.internal_states().size() == taus + 2 * inputs);
    // every tau is alone at both ends
    std::map<state_id, int> touches;
    for (const auto& tr : gw.cfsm().transitions())
      if (tr.label.is_tau()) {
        ++touches[tr.source];
        ++touches[tr.target];
      }
    for (const auto& [q, n] : touches) CHECK(n == 1);
    using role = fresh_origin::role;
    for (const auto& tr : gw.cfsm().transitions()) {
      if (tr.label.is_tau()) continue;
      bool peer = tr.label.partner() == participant{"K"};
      if (tr.label.is_input()) {
        auto r = gw.provenance().at(tr.target).kind;
        CHECK(r == (peer ? role::peer_input : role::own_input));
      } else if (peer) {
        CHECK(gw.provenance().at(tr.source).kind == role::peer_output);
      } else {
        CHECK(gw.external_states().count(tr.source));
      }
    }
  }
}

TEST_CASE("gateway preconditions") {
  auto h = load("ex_gc_s1.sys").at({"H"});
  CHECK_THROWS_AS(build_gateway(h, {"A"}), cfsm::error);
  CHECK_THROWS_AS(build_gateway(h, {"H"}), cfsm::error);
}

TEST_CASE("nof") {
  auto cs = compose_gc();
  CHECK(nof_state(cs.left_gateway, "0") == "0");
  CHECK(nof_state(cs.left_gateway, "1") == "1");
  CHECK(nof_state(cs.left_gateway, "0?1") == "0");
  CHECK(nof_state(cs.left_gateway, "0!1") == "0");
  // state 2 of the drawn K gateway is the original tau target 2
  CHECK(nof_state(cs.right_gateway, "2") == "3");
  CHECK(nof_state(cs.right_gateway, "0>2") == "3");
  CHECK(nof_state(cs.right_gateway, "0") == "0");
  CHECK(nof_state(cs.right_gateway, "3") == "3");
  CHECK_THROWS_AS(nof_state(cs.right_gateway, "nope"), cfsm::error);
}

TEST_CASE("composability") {
  auto gc = check_composability(load("ex_gc_s1.sys"), {"H"},
                                load("ex_sem.sys"), {"K"});
  CHECK(gc.composable);
  CHECK(gc.issues.empty());

  auto dl = check_composability(load("ex_dlfree_s1.sys"), {"H"},
                                load("ex_dlfree_s2.sys"), {"K"});
  CHECK_FALSE(dl.composable);
  CHECK(dl.compatible);
  CHECK(dl.has_issue("not-out-deterministic"));
  CHECK(dl.has_issue("not-in-deterministic"));

  auto mx = check_composability(load("mixed_s1.sys"), {"H"},
                                load("mixed_s2.sys"), {"K"});
  CHECK_FALSE(mx.composable);
  CHECK(mx.has_issue("asymmetric-mixed"));

  auto in = check_composability(load("incompat_s1.sys"), {"H"},
                                load("incompat_s2.sys"), {"K"});
  CHECK(in.has_issue("not-compatible"));

  auto overlap = check_composability(load("ex_gc_s1.sys"), {"H"},
                                     load("ex_gc_s1.sys"), {"A"});
  CHECK_FALSE(overlap.disjoint_domains);
  CHECK(overlap.has_issue("domain-overlap"));
}

TEST_CASE("composition of ex_gc") {
  auto cs = compose_gc();
  CHECK(cs.sys.participants().size() == 7);
  CHECK_FALSE(cs.forced);
  for (const auto& p : {"A", "B"})
    CHECK(cs.sys.at({p}) == cs.left.at({p}));
  for (const auto& p : {"C", "D", "E"})
    CHECK(cs.sys.at({p}) == cs.right.at({p}));
  CHECK(cs.sys.at({"H"}) == cs.left_gateway.cfsm());
  CHECK(cs.sys.at({"K"}) == cs.right_gateway.cfsm());

  auto lts = build_semantics(cs.sys);
  auto pc = verify_projection_lemma(cs, lts);
  CHECK(pc.holds);
  CHECK(pc.checked == lts.size());
  CHECK(pc.counterexamples.empty());
  CHECK(check_implication_chain(cs.sys, lts));
}

TEST_CASE("composition refusals") {
  try {
    compose_fixture("incompat");
    FAIL("expected refusal");
  } catch (const cfsm::error& e) {
    CHECK(e.code() == errc::not_composable);
  }
  CHECK(compose_fixture("incompat", true).forced);
  try {
    compose_systems(load("ex_gc_s1.sys"), {"H"}, load("ex_gc_s1.sys"), {"A"},
                    true);
    FAIL("expected refusal");
  } catch (const cfsm::error& e) {
    CHECK(e.code() == errc::domain_overlap);
  }
}

TEST_CASE("configuration projection") {
  auto cs = compose_gc();
  auto lts = build_semantics(cs.sys);
  auto init = lts.config(lts.initial());
  CHECK(project_configuration(cs, init, side::left) ==
        initial_configuration(cs.left));
  CHECK(project_configuration(cs, init, side::right) ==
        initial_configuration(cs.right));

  auto run = replay(cs.sys, lts, init,
                    labels_of({"tau(A)", "A->H:m", "tau(H)", "H->K:m"}));
  REQUIRE(run.has_value());
  const auto& s = run->back();
  CHECK(s.at({"A"}) == "2");
  CHECK(s.at({"H"}) == "1");
  CHECK(s.at({"K"}) == "0>1");
  configuration left{{{"A"}, "2"}, {{"B"}, "0"}, {{"H"}, "1"}};
  configuration right{{{"K"}, "0"}, {{"C"}, "0"}, {{"D"}, "0"}, {{"E"}, "0"}};
  CHECK(project_configuration(cs, s, side::left) == left);
  CHECK(project_configuration(cs, s, side::right) == right);
}

TEST_CASE("projection lemma reports forced incompatible compositions") {
  auto cs = compose_fixture("incompat", true);
  auto pc = verify_projection_lemma(cs, build_semantics(cs.sys));
  CHECK_FALSE(pc.holds);
  REQUIRE_FALSE(pc.counterexamples.empty());
  CHECK(pc.counterexamples.front().clause == "nof-correspondence");
}

TEST_CASE("participants enabled at the incompatibility deadlock") {
  auto cs = compose_fixture("incompat", true);
  auto lts = build_semantics(cs.sys);
  auto r = find_deadlocks(cs.sys, lts);
  REQUIRE(r.witnesses.size() == 1);
  // H still waits on its input from K, so it counts as enabled
  CHECK(enabled_participants(cs.sys, r.witnesses.front().config) ==
        std::set<participant>{{"A"}, {"H"}, {"K"}});
}
