// simulate.hpp
// Synthetic completely randomized experiments and the end-to-end
// pipeline: draw an effect from the prior, run the experiment, form the
// posterior, apply the adjusted policy, and score realized regret. Used
// to validate the analytic machinery against brute-force sampling.
#pragma once

#include <cstdint>
#include <vector>

#include "patro/adjust.hpp"
#include "patro/belief.hpp"
#include "patro/expectation.hpp"
#include "patro/regret.hpp"
#include "patro/snr.hpp"

namespace patro {

struct ExperimentSample {
  struct Observation {
    double y = 0.0;  // measured outcome
    int w = 0;       // 1 if treated
  };
  std::vector<Observation> outcomes;
  int n1 = 0;  // treated count
  int n0 = 0;  // control count
};

// Draws a completely randomized experiment: exactly n1 treated units
// chosen uniformly, outcomes b + tau*w + noise. Group sizes follow
// n1 = round(n*gamma/(1+gamma)); downstream code should rebuild the
// design from the realized n1/n0 ratio. Deterministic under seed.
// Throws std::invalid_argument when either group would be empty.
ExperimentSample generate(const ExperimentDesign& design,
                          const NoiseModel& noise, double tau_true,
                          std::uint64_t seed);

// Difference in group means, treated minus control.
double naive_estimate(const ExperimentSample& sample);

// Realized-regret decomposition of the adjusted policy over full
// synthetic replications. Each replication draws its own generator from
// (seed, index), so results do not depend on evaluation order.
McRegret run_pipeline(const SnrModel& model, const PriorBelief& prior,
                      const ExperimentDesign& design, const NoiseModel& noise,
                      const AdjustmentPair& pair, long replications,
                      std::uint64_t seed);

// Monte Carlo estimate of the newsvendor payoff gain from raw demand
// draws, bypassing the closed form entirely. Common random numbers pair
// the treated and status-quo scenarios.
McEstimate raw_newsvendor_payoff(const NewsvendorSnr& model, double tau_hat,
                                 double tau, long draws, std::uint64_t seed);

}  // namespace patro
