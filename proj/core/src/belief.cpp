// belief.cpp

#include "patro/belief.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "patro/math.hpp"

namespace patro {

BeliefSystem build_belief_system(const PriorBelief& prior,
                                 const ExperimentDesign& design,
                                 const NoiseModel& noise) {
  if (!(prior.v0 > 0.0)) {
    throw std::invalid_argument("build_belief_system: v0 must be positive");
  }
  if (design.n < 2) {
    throw std::invalid_argument("build_belief_system: n must be at least 2");
  }
  if (!(design.gamma > 0.0)) {
    throw std::invalid_argument("build_belief_system: gamma must be positive");
  }
  if (!(noise.sigma_eps > 0.0)) {
    throw std::invalid_argument(
        "build_belief_system: sigma_eps must be positive");
  }
  BeliefSystem belief;
  belief.prior = prior;
  belief.design = design;
  belief.noise = noise;
  const double g = design.gamma;
  const double s2 = noise.sigma_eps * noise.sigma_eps;
  // Sampling variance of the difference-of-means estimate.
  const double est_var = s2 * (1.0 + g) * (1.0 + g) / (g * design.n);
  belief.v_tilde = 1.0 / (1.0 / prior.v0 + 1.0 / est_var);
  belief.v_m = prior.v0 * prior.v0 / (prior.v0 + est_var);
  return belief;
}

Posterior posterior_update(const BeliefSystem& belief, double naive_estimate) {
  const double v0 = belief.prior.v0;
  const double g = belief.design.gamma;
  const double s2 = belief.noise.sigma_eps * belief.noise.sigma_eps;
  Posterior post;
  post.v_tilde = belief.v_tilde;
  post.m_tilde = (belief.v_tilde / v0) * belief.prior.m0 +
                 (belief.design.n * g * belief.v_tilde /
                  (s2 * (1.0 + g) * (1.0 + g))) *
                     naive_estimate;
  return post;
}

std::pair<double, double> conditional_effect_law(const BeliefSystem& belief,
                                                 double m) {
  return {m, belief.v_tilde};
}

double joint_density(const BeliefSystem& belief, double tau, double m) {
  const double sm = std::sqrt(belief.v_m);
  const double st = std::sqrt(belief.v_tilde);
  return normal_pdf((m - belief.prior.m0) / sm) / sm *
         normal_pdf((tau - m) / st) / st;
}

}  // namespace patro
