// bench_main.cpp
// Timings for the hot paths: the truncated joint expectation that every
// solver call sits on, the single and dual adjustment solves, the regret
// decomposition, and the Bayes benchmark. Sizes sweep the experiment
// scale to show cost is flat in n.
#include <benchmark/benchmark.h>

#include <patro/adjust.hpp>
#include <patro/bayes.hpp>
#include <patro/belief.hpp>
#include <patro/expectation.hpp>
#include <patro/regret.hpp>
#include <patro/simulate.hpp>
#include <patro/snr.hpp>

namespace {

using namespace patro;

BeliefSystem belief_for(long n, double v0, double sigma) {
  return build_belief_system({0.0, v0}, {n, 1.0}, {sigma, 0.0});
}

void bm_truncated_joint_expectation(benchmark::State& state) {
  const long n = state.range(0);
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, n);
  const BeliefSystem belief = belief_for(n, 1.0, 1.0);
  const JointIntegrand payoff = [&](double tau, double m) {
    return model.value(m, tau);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(
        truncated_joint_expectation(belief, payoff, 0.0));
}
BENCHMARK(bm_truncated_joint_expectation)->Arg(10)->Arg(1000);

void bm_solve_rollout_single(benchmark::State& state) {
  const long n = state.range(0);
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 1.0, n);
  const BeliefSystem belief = belief_for(n, 1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_rollout_single(model, belief));
}
BENCHMARK(bm_solve_rollout_single)->Arg(10)->Arg(1000);

void bm_solve_dual_newsvendor(benchmark::State& state) {
  const long n = state.range(0);
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, n);
  const BeliefSystem belief = belief_for(n, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual(model, belief));
}
BENCHMARK(bm_solve_dual_newsvendor)->Arg(10)->Arg(1000);

void bm_solve_dual_service(benchmark::State& state) {
  const long n = state.range(0);
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 1.0, n);
  const BeliefSystem belief = belief_for(n, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dual(model, belief));
}
BENCHMARK(bm_solve_dual_service)->Arg(10)->Arg(1000);

void bm_prior_expected_regret(benchmark::State& state) {
  const long n = state.range(0);
  const PricingSnr model(1.0, 1.0, 1.0, LambdaKind::LogLinear, n);
  const BeliefSystem belief = belief_for(n, 2.0, 1.0);
  const AdjustmentPair pair = solve_dual(model, belief);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        prior_expected_regret(model, belief, pair.delta_r, pair.delta_o));
}
BENCHMARK(bm_prior_expected_regret)->Arg(10)->Arg(1000);

void bm_bayes_prior_regret(benchmark::State& state) {
  const long n = state.range(0);
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 1.0, n);
  const BeliefSystem belief = belief_for(n, 1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(bayes_prior_regret(model, belief));
}
BENCHMARK(bm_bayes_prior_regret)->Arg(10)->Arg(1000);

void bm_pipeline_replication(benchmark::State& state) {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const BeliefSystem belief = belief_for(50, 1.0, 1.0);
  const AdjustmentPair pair = solve_dual(model, belief);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_pipeline(model, belief.prior, belief.design,
                                          belief.noise, pair, 1000, 99));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_pipeline_replication);

}  // namespace

BENCHMARK_MAIN();
