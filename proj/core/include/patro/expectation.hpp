// expectation.hpp
// The three expectation shapes the solvers need: conditional expectation
// given a realized posterior mean, truncated joint expectation over
// {posterior mean > r}, and a Monte Carlo estimator used as an
// independent cross-check on the deterministic quadrature.
#pragma once

#include <cstdint>
#include <functional>

#include "patro/belief.hpp"

namespace patro {

struct QuadratureSpec {
  int inner_nodes = 64;   // Gauss-Hermite nodes for the effect given m
  int outer_nodes = 96;   // Gauss-Legendre nodes for the posterior mean
  double tail_sd = 10.0;  // truncation half-width in standard deviations
};

// Throws std::invalid_argument when node counts fall below 8 or the tail
// is narrower than 6 standard deviations.
void check_spec(const QuadratureSpec& spec);

using ScalarIntegrand = std::function<double(double tau)>;
using JointIntegrand = std::function<double(double tau, double m)>;

// E[g(tau) | posterior mean = m], the effect integrated against
// N(m, v_tilde) by Gauss-Hermite quadrature. Throws std::runtime_error
// naming the offending node if g is not finite there.
double conditional_expectation(const BeliefSystem& belief,
                               const ScalarIntegrand& g, double m,
                               const QuadratureSpec& spec = {});

// E[g(tau, m) 1{m > r}] over the joint law, nested quadrature: the
// posterior mean integrated over (r, infinity) truncated at tail_sd
// standard deviations, the effect integrated per outer node. Pass
// r <= m0 - tail_sd * sqrt(v_m) for the untruncated expectation.
double truncated_joint_expectation(const BeliefSystem& belief,
                                   const JointIntegrand& g, double r,
                                   const QuadratureSpec& spec = {});

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo version of truncated_joint_expectation from i.i.d. joint
// draws; deterministic given the seed. Requires draws >= 10000.
McEstimate monte_carlo_expectation(const BeliefSystem& belief,
                                   const JointIntegrand& g, double r,
                                   long draws, std::uint64_t seed);

}  // namespace patro
