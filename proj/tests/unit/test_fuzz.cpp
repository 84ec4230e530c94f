#include <doctest.h>

#include <json.hpp>
#include <random>

#include "support.hpp"

using namespace cfsm;
using namespace cfsm::test;

TEST_CASE("random systems are deterministic and valid") {
  fuzz_params params;
  params.seed = 1;
  CHECK(random_system(params) == random_system(params));
  std::size_t deadlocking = 0, free = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    params.seed = seed;
    auto sys = random_system(params);
    CHECK(sys.participants().size() <= params.max_participants);
    CHECK_NOTHROW(validate_system(sys.machines(), sys.name()));
    auto lts = build_semantics(sys);
    (find_deadlocks(sys, lts).holds ? free : deadlocking) += 1;
  }
  CHECK(deadlocking >= 1);
  CHECK(free >= 1);
}

TEST_CASE("random machines respect the generator shape") {
  fuzz_params params;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    auto m = random_machine(rng, params, {"H"}, {{"A"}, {"B"}});
    CHECK(m.graph().out_degree(m.initial()) > 0);
    for (const auto& q : m.states()) {
      auto c = classify_state(m, q);
      CHECK_FALSE(c.asymmetric_mixed);
    }
  }
}

TEST_CASE("derived peers") {
  auto h = load("ex_gc_s1.sys").at({"H"});
  auto k = load("ex_sem.sys").at({"K"});
  auto d = derive_compatible_peer(h, {"K"}, {{"C"}, {"D"}});
  CHECK(check_compatibility(h, d).compatible);
  CHECK(find_isomorphism(io_projection(d), io_projection(k), {}).has_value());

  auto term = machine_from("M", "init 0");
  auto dt = derive_compatible_peer(term, {"N"}, {{"A"}});
  CHECK(dt.transitions().empty());

  auto one = machine_from("M", "init 0\n0 tau 1\n1 ! A m 2");
  auto d1 = derive_compatible_peer(one, {"N"}, {{"B"}});
  REQUIRE(d1.transitions().size() == 1);
  CHECK(d1.transitions().front().label.is_input());
  CHECK(d1.transitions().front().label.msg() == message{"m"});
  CHECK(check_compatibility(one, d1).compatible);
}

TEST_CASE("deriving twice gives back the shape") {
  fuzz_params params;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    auto m = random_machine(rng, params, {"H"}, {{"A"}, {"B"}});
    auto d = derive_compatible_peer(m, {"K"}, {{"C"}});
    auto dd = derive_compatible_peer(d, {"H"}, {{"A"}});
    CHECK(find_isomorphism(io_projection(dd), io_projection(m), {})
              .has_value());
    CHECK(check_compatibility(dd, d).compatible);
    CHECK(check_compatibility(m, d).compatible);
  }
}

TEST_CASE("parameter validation") {
  fuzz_params params;
  CHECK_NOTHROW(params.validate());
  params.max_states = 0;
  CHECK_THROWS_AS(params.validate(), cfsm::error);
  params = {};
  params.iterations = 0;
  CHECK_THROWS_AS(run_preservation_fuzz(params), cfsm::error);
}

TEST_CASE("short campaign") {
  fuzz_params params;
  params.iterations = 40;
  params.threads = 2;
  auto r = run_preservation_fuzz(params);
  CHECK(r.violations.empty());
  CHECK(r.stats.iterations == 40);
  CHECK(r.stats.composable + r.stats.skipped == 40);
  CHECK(r.stats.deadlock_premise > 0);
  CHECK(r.stats.projection_checked > 0);

  params.threads = 1;
  auto again = run_preservation_fuzz(params);
  CHECK(fuzz_report_to_json(again) == fuzz_report_to_json(r));

  auto j = nlohmann::json::parse(fuzz_report_to_json(r));
  CHECK(j.contains("stats"));
  CHECK(j.contains("violations"));
  CHECK(r.count("deadlock-freedom") == 0);
}
