// Serial references against the OpenMP kernels on the market stream (oracle
// sweep) and a static scalar stream (Monte Carlo replications).

#include <benchmark/benchmark.h>

#include "eqtrack/market.hpp"
#include "eqtrack/parallel.hpp"
#include "eqtrack/synthetic.hpp"

using namespace eqtrack;

namespace {

const ProblemStream& market_stream() {
  static const ProblemStream stream = [] {
    const market::MarketSpec spec;
    const auto [d1, d2] = market::generate_market_demand(spec, 3, 42);
    return market::build_market_stream(spec, d1, d2, {});
  }();
  return stream;
}

struct ScalarSetup {
  ProblemStream stream;
  EquilibriumSequence eq;
  Vector z0;
  SolverConfig cfg;
};

const ScalarSetup& scalar_setup() {
  static const ScalarSetup setup = [] {
    auto stream = ProblemStream::constant(synthetic::scalar_problem(1.0, 0.5, 1.0), 500);
    EquilibriumSequence eq = equilibrium_sequence_serial(stream, SolverConfig::oracle_defaults());
    Vector z0(2);
    z0 << -4.0, 6.0;
    SolverConfig cfg;
    cfg.eta = 0.1;
    return ScalarSetup{std::move(stream), std::move(eq), z0, cfg};
  }();
  return setup;
}

void BM_EquilibriumSequenceSerial(benchmark::State& state) {
  const auto& stream = market_stream();
  for (auto _ : state) {
    benchmark::DoNotOptimize(equilibrium_sequence_serial(stream, SolverConfig::oracle_defaults()));
  }
}

void BM_EquilibriumSequenceParallel(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const auto& stream = market_stream();
  for (auto _ : state) {
    benchmark::DoNotOptimize(equilibrium_sequence(stream, SolverConfig::oracle_defaults()));
  }
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto& s = scalar_setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_serial(s.stream, s.z0, s.cfg, s.eq, 1000));
  }
}

void BM_MonteCarloParallel(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const auto& s = scalar_setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo(s.stream, s.z0, s.cfg, s.eq, 1000));
  }
}

}  // namespace

BENCHMARK(BM_EquilibriumSequenceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EquilibriumSequenceParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
