// adjust.hpp
// Exact first-order-condition solvers for the rollout and operational
// adjustments, their small-posterior-variance approximations, the
// alternating scheme for the joint pair, and the interaction classifier.
#pragma once

#include <utility>
#include <vector>

#include "patro/belief.hpp"
#include "patro/expectation.hpp"
#include "patro/snr.hpp"

namespace patro {

struct AdjustmentPair {
  double delta_r = 0.0;
  double delta_o = 0.0;
  int iterations = 0;
  bool converged = false;
  // First-order-condition residuals at the returned pair, in payoff
  // units: (rollout, operational).
  std::pair<double, double> residuals{0.0, 0.0};
};

struct SolverConfig {
  double root_tol = 1e-10;  // residual tolerance, times scale_n
  double alt_tol = 1e-9;    // stop when |dr| + |do| falls below this
  int max_alt_iters = 100;
  // Half-width of the initial root bracket; 0 means 10 sqrt(v_tilde).
  double bracket_halfwidth = 0.0;
};

// Spot checks, at the unadjusted point, of the two conditions that make
// the alternating scheme a contraction: curvature of the operational
// mapping and nondegeneracy of the rollout mapping. Values are per unit.
struct DualConditions {
  double c1 = 0.0;  // minus the truncated expected plug-in curvature
  double c2 = 0.0;  // |total derivative of the threshold payoff|
  bool c1_ok = false;
  bool c2_ok = false;
};

// Rollout adjustment alone: the shift d solving
// E[payoff(posterior mean | effect) at the threshold posterior mean -d].
double solve_rollout_single(const SnrModel& model, const BeliefSystem& belief,
                            const SolverConfig& cfg = {},
                            const QuadratureSpec& spec = {});

// Leading-order approximation: curvature over slope at zero, times half
// the posterior variance.
double rollout_asymptotic(const SnrModel& model, const BeliefSystem& belief);

// Operational adjustment given a rollout shift already in force (the
// expectation is truncated to posterior means above -r_shift). A payoff
// with no estimate dependence returns 0 by convention.
double solve_operational(const SnrModel& model, const BeliefSystem& belief,
                         double r_shift, const SolverConfig& cfg = {},
                         const QuadratureSpec& spec = {});

// Leading-order approximation built from the truncated expectations of
// the cross-curvature and plug-in curvature at the truth. Returns 0 when
// the numerator vanishes; throws std::runtime_error when only the
// curvature denominator degenerates.
double operational_asymptotic(const SnrModel& model,
                              const BeliefSystem& belief, double r_shift,
                              const QuadratureSpec& spec = {});

// Alternates the operational solve (given the rollout shift) with the
// rollout solve (given the operational shift) from (0, 0) until the pair
// stops moving. The optional trace records each iterate; conditions
// receives the contraction spot checks when non-null.
AdjustmentPair solve_dual(const SnrModel& model, const BeliefSystem& belief,
                          const SolverConfig& cfg = {},
                          const QuadratureSpec& spec = {},
                          DualConditions* conditions = nullptr,
                          std::vector<std::pair<double, double>>* trace =
                              nullptr);

enum class Interaction { Substitutes, Complements, Neutral };

const char* to_string(Interaction interaction);

// Compares the rollout adjustment solved alone against the one solved
// jointly: a smaller joint magnitude means the operational adjustment
// substitutes for rollout caution, a larger one means they compound.
Interaction classify_interaction(double single_r, double dual_r);

}  // namespace patro
