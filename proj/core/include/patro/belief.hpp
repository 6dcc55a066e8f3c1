// belief.hpp
// Bayesian model of the experimentally estimated treatment effect: normal
// prior, two-arm experiment design, conjugate posterior update, and the
// joint law of (effect, posterior mean).
#pragma once

#include <utility>

namespace patro {

struct PriorBelief {
  double m0 = 0.0;  // prior mean of the effect, outcome units
  double v0 = 1.0;  // prior variance, must be positive
};

struct ExperimentDesign {
  long n = 2;          // total units across both arms
  double gamma = 1.0;  // treated-to-control size ratio n1/n0
};

struct NoiseModel {
  double sigma_eps = 1.0;  // idiosyncratic outcome noise s.d.
  double b = 0.0;          // known baseline mean level (simulation only)
};

// Derived posterior and joint-law quantities. v_tilde is the posterior
// variance of the effect given the experiment; v_m is the prior variance
// of the posterior mean. They satisfy v0 = v_m + v_tilde.
struct BeliefSystem {
  PriorBelief prior;
  ExperimentDesign design;
  NoiseModel noise;
  double v_tilde = 0.0;
  double v_m = 0.0;
};

struct Posterior {
  double m_tilde = 0.0;
  double v_tilde = 0.0;
};

// Validates the inputs and computes the posterior-variance pair.
// Throws std::invalid_argument for non-positive v0, sigma_eps, gamma,
// or n < 2.
BeliefSystem build_belief_system(const PriorBelief& prior,
                                 const ExperimentDesign& design,
                                 const NoiseModel& noise);

// Conjugate update from the difference-of-means estimate.
Posterior posterior_update(const BeliefSystem& belief, double naive_estimate);

// Law of the effect given a realized posterior mean m: N(m, v_tilde).
// Returned as (mean, variance).
std::pair<double, double> conditional_effect_law(const BeliefSystem& belief,
                                                 double m);

// Joint density of (effect, posterior mean). Used for testing; every
// expectation in the library goes through the factorized form
// m ~ N(m0, v_m), tau | m ~ N(m, v_tilde).
double joint_density(const BeliefSystem& belief, double tau, double m);

}  // namespace patro
