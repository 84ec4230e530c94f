#include <benchmark/benchmark.h>

#include <random>

#include "cfsm/fuzz.hpp"
#include "cfsm/io.hpp"

namespace {

using namespace cfsm;

// A ring of n participants passing a token around, each with a spare
// message to the next one: the LTS grows with n.
cfsm::system ring(std::size_t n) {
  std::string text = "system ring\n";
  for (std::size_t i = 0; i < n; ++i) {
    auto me = "P" + std::to_string(i);
    auto next = "P" + std::to_string((i + 1) % n);
    auto prev = "P" + std::to_string((i + n - 1) % n);
    text += "machine " + me + " {\n  init " + (i == 0 ? "1" : "0") + "\n";
    text += "  0 ? " + prev + " tok 1\n";
    text += "  1 tau 2\n  2 ! " + next + " tok 0\n";
    text += "  1 tau 3\n  3 ! " + next + " tok 0\n";
    text += "}\n";
  }
  return parse_system_file(text);
}

cfsm::system random_pick(std::uint64_t seed) {
  fuzz_params p;
  p.seed = seed;
  p.max_participants = 5;
  return random_system(p);
}

void bm_build_semantics(benchmark::State& state) {
  auto sys = ring(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_semantics(sys));
}
BENCHMARK(bm_build_semantics)->RangeMultiplier(2)->Range(4, 64);

void bm_random_semantics(benchmark::State& state) {
  std::vector<cfsm::system> systems;
  for (std::uint64_t s = 0; s < 32; ++s) systems.push_back(random_pick(s));
  for (auto _ : state)
    for (const auto& sys : systems)
      benchmark::DoNotOptimize(build_semantics(sys));
}
BENCHMARK(bm_random_semantics);

void bm_checkers(benchmark::State& state) {
  auto sys = ring(static_cast<std::size_t>(state.range(0)));
  auto lts = build_semantics(sys);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_deadlocks(sys, lts));
    benchmark::DoNotOptimize(find_locks(sys, lts));
    benchmark::DoNotOptimize(check_strong_lock_freedom(sys, lts));
  }
  state.counters["configurations"] = static_cast<double>(lts.size());
}
BENCHMARK(bm_checkers)->RangeMultiplier(2)->Range(4, 64);

void bm_compatibility(benchmark::State& state) {
  fuzz_params p;
  p.max_states = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  auto m = random_machine(rng, p, {"H"}, {{"A"}, {"B"}});
  auto d = derive_compatible_peer(m, {"K"}, {{"C"}});
  for (auto _ : state) benchmark::DoNotOptimize(check_compatibility(m, d));
}
BENCHMARK(bm_compatibility)->RangeMultiplier(4)->Range(4, 256);

void bm_fuzz(benchmark::State& state) {
  fuzz_params p;
  p.iterations = 50;
  p.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_preservation_fuzz(p));
}
BENCHMARK(bm_fuzz)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
