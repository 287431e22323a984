#include <benchmark/benchmark.h>

#include <random>

#include "omegaforge/checkpoint.hpp"
#include "omegaforge/complexity.hpp"
#include "omegaforge/explorer.hpp"
#include "omegaforge/lawful.hpp"

using namespace omegaforge;

namespace {

// INC A x n; DECJNZ A,0; HALT: a countdown of n iterations.
Program countdown(unsigned n) {
  std::vector<Instruction> code(n, asm_::inc(Register::A));
  code.push_back(asm_::decjnz(Register::A, 0));
  code.push_back(asm_::halt());
  return asm_::assemble(code);
}

void BM_RunStraightLine(benchmark::State& state) {
  BitString subject;
  for (int i = 0; i < state.range(0); ++i) subject.push_back(i % 3 == 0);
  const Program p = straight_line_program(subject);
  for (auto _ : state) benchmark::DoNotOptimize(run(p, 1'000'000));
}
BENCHMARK(BM_RunStraightLine)->Arg(16)->Arg(256);

void BM_RunCountdown(benchmark::State& state) {
  const Program p = countdown(static_cast<unsigned>(state.range(0)));
  std::uint64_t steps = 0;
  for (auto _ : state) {
    const auto r = run(p, 1'000'000);
    steps = r.steps;
    benchmark::DoNotOptimize(r);
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_RunCountdown)->Arg(8)->Arg(64);

void BM_Explore(benchmark::State& state) {
  ExploreOptions o;
  o.threads = static_cast<unsigned>(state.range(1));
  const ExploreBudget budget{static_cast<std::size_t>(state.range(0)), 1'000'000};
  std::size_t nodes = 0;
  for (auto _ : state) {
    const auto r = explore(budget, o);
    nodes = r.store.size();
    benchmark::DoNotOptimize(r);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes) * state.iterations(),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Explore)->Args({14, 1})->Args({18, 1})->Args({18, 4})->Unit(benchmark::kMillisecond);

void BM_CheckpointRoundTrip(benchmark::State& state) {
  const NodeStore store = explore(ExploreBudget{16, 100'000}).store;
  for (auto _ : state) {
    const std::string text = serialize_checkpoint(store, true);
    benchmark::DoNotOptimize(parse_checkpoint(text));
  }
}
BENCHMARK(BM_CheckpointRoundTrip)->Unit(benchmark::kMillisecond);

void BM_ComplexityIndex(benchmark::State& state) {
  const NodeStore store = explore(ExploreBudget{16, 100'000}).store;
  for (auto _ : state) benchmark::DoNotOptimize(ComplexityIndex(store));
}
BENCHMARK(BM_ComplexityIndex)->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back({coord(rng), coord(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(pts));
}
BENCHMARK(BM_Interpolate)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
