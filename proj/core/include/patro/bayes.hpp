// bayes.hpp
// Bayes-optimal benchmark: the rule that, for each posterior mean, picks
// the payoff-maximizing plug-in effect and rolls out only when the
// resulting posterior expected payoff is positive. Its prior expected
// regret lower-bounds every adjusted plug-in policy; the gap to the
// solved adjustment pair measures how much PATRO leaves on the table.
#pragma once

#include "patro/adjust.hpp"
#include "patro/belief.hpp"
#include "patro/expectation.hpp"
#include "patro/snr.hpp"

namespace patro {

struct BayesDecision {
  bool rollout = false;          // ship the treatment at this posterior mean
  double effective_effect = 0.0; // plug-in effect the unit decisions act on
  double posterior_value = 0.0;  // posterior expected payoff of that choice
};

// Maximizes posterior expected payoff over the plug-in effect at a given
// posterior mean. Models whose payoff ignores the estimate keep the mean
// itself as the plug-in. rollout is posterior_value > 0 by construction.
BayesDecision bayes_decide(const SnrModel& model, const BeliefSystem& belief,
                           double m, const QuadratureSpec& spec = {});

// Prior expected regret of the Bayes rule.
double bayes_prior_regret(const SnrModel& model, const BeliefSystem& belief,
                          const QuadratureSpec& spec = {});

// Percent excess regret of the adjusted policy over the Bayes rule,
// 100*(R_patro - R_bayes)/R_bayes. Both regrets are integrated on a
// shared panel layout so the difference is not dominated by
// discretization noise. Throws std::runtime_error when the Bayes regret
// is not positive.
double patro_bayes_gap(const SnrModel& model, const BeliefSystem& belief,
                       const AdjustmentPair& pair,
                       const QuadratureSpec& spec = {});

}  // namespace patro
