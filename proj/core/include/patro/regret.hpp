// regret.hpp
// Prior expected regret of an adjusted rollout policy and its three-way
// decomposition: missed gains from not rolling out, losses from rolling
// out a harmful treatment, and miscalibrated unit decisions after a
// correct rollout. Quadrature evaluation plus a Monte Carlo cross-check.
#pragma once

#include <cstdint>
#include <vector>

#include "patro/adjust.hpp"
#include "patro/belief.hpp"
#include "patro/expectation.hpp"
#include "patro/snr.hpp"

namespace patro {

struct RegretBreakdown {
  double type_one = 0.0;     // rolled out, effect actually negative
  double type_two = 0.0;     // held back, effect actually positive
  double operational = 0.0;  // rolled out, units tuned to the wrong effect
  double total = 0.0;        // sum of the three components
};

// Evaluates the three regret components for the policy that rolls out
// when the posterior mean exceeds -delta_r and plugs the shifted mean
// into the unit decisions.
RegretBreakdown prior_expected_regret(const SnrModel& model,
                                      const BeliefSystem& belief,
                                      double delta_r, double delta_o,
                                      const QuadratureSpec& spec = {});

struct McRegret {
  RegretBreakdown mean;
  RegretBreakdown std_error;
};

// Monte Carlo estimate of the same decomposition from joint draws of
// (effect, posterior mean); deterministic given the seed.
McRegret monte_carlo_regret(const SnrModel& model, const BeliefSystem& belief,
                            double delta_r, double delta_o, long draws,
                            std::uint64_t seed);

// Percent reduction in total regret relative to the unadjusted policy.
// Throws std::runtime_error when the baseline regret is not positive.
double improvement_rate(const SnrModel& model, const BeliefSystem& belief,
                        const AdjustmentPair& pair,
                        const QuadratureSpec& spec = {});

// Total regret on a grid of adjustment pairs; element [i][j] belongs to
// (delta_r_grid[i], delta_o_grid[j]). Solver optimality checks compare a
// candidate pair against this surface through the same code path, so a
// single-point grid prices one pair.
std::vector<std::vector<double>> regret_surface(
    const SnrModel& model, const BeliefSystem& belief,
    const std::vector<double>& delta_r_grid,
    const std::vector<double>& delta_o_grid, const QuadratureSpec& spec = {});

}  // namespace patro
