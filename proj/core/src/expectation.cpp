// expectation.cpp

#include "patro/expectation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "patro/math.hpp"

namespace patro {

void check_spec(const QuadratureSpec& spec) {
  if (spec.inner_nodes < 8 || spec.outer_nodes < 8) {
    throw std::invalid_argument("QuadratureSpec: node counts must be >= 8");
  }
  if (!(spec.tail_sd >= 6.0)) {
    throw std::invalid_argument("QuadratureSpec: tail_sd must be >= 6");
  }
}

namespace {

[[noreturn]] void bad_node(const char* where, double tau, double m) {
  throw std::runtime_error(std::string(where) +
                           ": integrand not finite at node tau=" +
                           std::to_string(tau) + ", m=" + std::to_string(m));
}

}  // namespace

double conditional_expectation(const BeliefSystem& belief,
                               const ScalarIntegrand& g, double m,
                               const QuadratureSpec& spec) {
  check_spec(spec);
  const QuadRule& rule = gauss_hermite_cached(spec.inner_nodes);
  // tau = m + sqrt(2 v) x maps the Hermite weight onto N(m, v).
  const double scale = std::sqrt(2.0 * belief.v_tilde);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  std::vector<double> terms(rule.x.size());
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double tau = m + scale * rule.x[k];
    const double gk = g(tau);
    if (!std::isfinite(gk)) bad_node("conditional_expectation", tau, m);
    terms[k] = rule.w[k] * gk;
  }
  return inv_sqrt_pi * pairwise_sum(terms);
}

double truncated_joint_expectation(const BeliefSystem& belief,
                                   const JointIntegrand& g, double r,
                                   const QuadratureSpec& spec) {
  check_spec(spec);
  const double m0 = belief.prior.m0;
  const double sm = std::sqrt(belief.v_m);
  const double lo = std::max(r, m0 - spec.tail_sd * sm);
  const double hi = m0 + spec.tail_sd * sm;
  if (!(lo < hi)) return 0.0;

  const QuadRule& outer = gauss_legendre_cached(spec.outer_nodes);
  const QuadRule& inner = gauss_hermite_cached(spec.inner_nodes);
  const double inner_scale = std::sqrt(2.0 * belief.v_tilde);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> outer_terms(outer.x.size());
  std::vector<double> inner_terms(inner.x.size());
  for (std::size_t i = 0; i < outer.x.size(); ++i) {
    const double m = mid + half * outer.x[i];
    for (std::size_t k = 0; k < inner.x.size(); ++k) {
      const double tau = m + inner_scale * inner.x[k];
      const double gk = g(tau, m);
      if (!std::isfinite(gk)) bad_node("truncated_joint_expectation", tau, m);
      inner_terms[k] = inner.w[k] * gk;
    }
    const double cond = inv_sqrt_pi * pairwise_sum(inner_terms);
    outer_terms[i] =
        outer.w[i] * half * normal_pdf((m - m0) / sm) / sm * cond;
  }
  return pairwise_sum(outer_terms);
}

McEstimate monte_carlo_expectation(const BeliefSystem& belief,
                                   const JointIntegrand& g, double r,
                                   long draws, std::uint64_t seed) {
  if (draws < 10000) {
    throw std::invalid_argument(
        "monte_carlo_expectation: need at least 10^4 draws");
  }
  const double m0 = belief.prior.m0;
  const double sm = std::sqrt(belief.v_m);
  const double se = std::sqrt(belief.v_tilde);
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long k = 0; k < draws; ++k) {
    const double m = m0 + sm * rng.normal();
    // The estimation error is independent of the posterior mean.
    const double tau = m - se * rng.normal();
    const double val = (m > r) ? g(tau, m) : 0.0;
    sum += val;
    sum_sq += val * val;
  }
  McEstimate out;
  const double nd = static_cast<double>(draws);
  out.estimate = sum / nd;
  const double var = std::max(0.0, sum_sq / nd - out.estimate * out.estimate);
  out.std_error = std::sqrt(var / nd);
  return out;
}

}  // namespace patro
