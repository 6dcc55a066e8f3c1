// regret.cpp
#include "patro/regret.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "patro/math.hpp"

namespace patro {
namespace {

// Integral of q(t) against the N(mean, sd^2) density over [a, b].
double segment_expectation(const std::function<double(double)>& q, double mean,
                           double sd, double a, double b,
                           const QuadRule& rule) {
  if (!(b > a)) return 0.0;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> terms(rule.x.size());
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double t = mid + half * rule.x[k];
    const double z = (t - mean) / sd;
    terms[k] = rule.w[k] * half * normal_pdf(z) / sd * q(t);
  }
  return pairwise_sum(terms);
}

// Realized payoff when holding the experiment's estimate at the truth.
double oracle_at(const SnrModel& model, double tau) {
  return model.oracle_value(tau);
}

}  // namespace

RegretBreakdown prior_expected_regret(const SnrModel& model,
                                      const BeliefSystem& belief,
                                      double delta_r, double delta_o,
                                      const QuadratureSpec& spec) {
  check_spec(spec);
  if (!std::isfinite(delta_r) || !std::isfinite(delta_o))
    throw std::invalid_argument("adjustments must be finite");

  const double sm = std::sqrt(belief.v_m);
  const double st = std::sqrt(belief.v_tilde);
  const double lo = belief.prior.m0 - spec.tail_sd * sm;
  const double hi = belief.prior.m0 + spec.tail_sd * sm;
  const double split = std::clamp(-delta_r, lo, hi);
  const auto& outer = gauss_legendre_cached(spec.outer_nodes);
  const auto& inner = gauss_legendre_cached(spec.inner_nodes);

  // Missed-gain component: below the rollout threshold the treatment is
  // withheld, so any positive effect is foregone in full.
  const auto type_two_at = [&](double m) {
    const double a = std::max(0.0, m - spec.tail_sd * st);
    const double b = m + spec.tail_sd * st;
    return segment_expectation([&](double t) { return oracle_at(model, t); },
                               m, st, a, b, inner);
  };
  const double type_two =
      segment_expectation(type_two_at, belief.prior.m0, sm, lo, split, outer);

  // Above the threshold the treatment ships with units tuned to the
  // shifted posterior mean; split the effect axis at zero to separate
  // harmful rollouts from calibration losses.
  std::vector<double> one_terms;
  std::vector<double> op_terms;
  if (hi > split) {
    const double mid = 0.5 * (split + hi);
    const double half = 0.5 * (hi - split);
    one_terms.resize(outer.x.size());
    op_terms.resize(outer.x.size());
    for (std::size_t k = 0; k < outer.x.size(); ++k) {
      const double m = mid + half * outer.x[k];
      const double zm = (m - belief.prior.m0) / sm;
      const double fm = outer.w[k] * half * normal_pdf(zm) / sm;
      const double a = m - spec.tail_sd * st;
      const double b = m + spec.tail_sd * st;
      const double neg = segment_expectation(
          [&](double t) { return -model.value(m + delta_o, t); }, m, st, a,
          std::min(0.0, b), inner);
      const double pos = segment_expectation(
          [&](double t) {
            return oracle_at(model, t) - model.value(m + delta_o, t);
          },
          m, st, std::max(0.0, a), b, inner);
      one_terms[k] = fm * neg;
      op_terms[k] = fm * pos;
    }
  }

  RegretBreakdown out;
  out.type_two = type_two;
  out.type_one = pairwise_sum(one_terms);
  out.operational = pairwise_sum(op_terms);
  out.total = out.type_one + out.type_two + out.operational;
  return out;
}

McRegret monte_carlo_regret(const SnrModel& model, const BeliefSystem& belief,
                            double delta_r, double delta_o, long draws,
                            std::uint64_t seed) {
  if (draws < 10000)
    throw std::invalid_argument("monte_carlo_regret needs at least 10^4 draws");
  if (!std::isfinite(delta_r) || !std::isfinite(delta_o))
    throw std::invalid_argument("adjustments must be finite");

  const double sm = std::sqrt(belief.v_m);
  const double st = std::sqrt(belief.v_tilde);
  Rng rng(seed);

  double sum[4] = {0.0, 0.0, 0.0, 0.0};
  double sumsq[4] = {0.0, 0.0, 0.0, 0.0};
  for (long i = 0; i < draws; ++i) {
    const double m = belief.prior.m0 + sm * rng.normal();
    const double tau = m - st * rng.normal();
    double one = 0.0, two = 0.0, op = 0.0;
    if (m > -delta_r) {
      const double realized = model.value(m + delta_o, tau);
      if (tau < 0.0) {
        one = -realized;
      } else {
        op = oracle_at(model, tau) - realized;
      }
    } else if (tau > 0.0) {
      two = oracle_at(model, tau);
    }
    const double comp[4] = {one, two, op, one + two + op};
    for (int c = 0; c < 4; ++c) {
      sum[c] += comp[c];
      sumsq[c] += comp[c] * comp[c];
    }
  }

  McRegret out;
  double* means[4] = {&out.mean.type_one, &out.mean.type_two,
                      &out.mean.operational, &out.mean.total};
  double* errs[4] = {&out.std_error.type_one, &out.std_error.type_two,
                     &out.std_error.operational, &out.std_error.total};
  const double n = static_cast<double>(draws);
  for (int c = 0; c < 4; ++c) {
    const double mean = sum[c] / n;
    const double var = std::max(0.0, sumsq[c] / n - mean * mean);
    *means[c] = mean;
    *errs[c] = std::sqrt(var / n);
  }
  return out;
}

double improvement_rate(const SnrModel& model, const BeliefSystem& belief,
                        const AdjustmentPair& pair,
                        const QuadratureSpec& spec) {
  const double base =
      prior_expected_regret(model, belief, 0.0, 0.0, spec).total;
  if (!(base > 0.0))
    throw std::runtime_error(
        "unadjusted policy has no regret to improve upon");
  const double adjusted =
      prior_expected_regret(model, belief, pair.delta_r, pair.delta_o, spec)
          .total;
  return 100.0 * (base - adjusted) / base;
}

std::vector<std::vector<double>> regret_surface(
    const SnrModel& model, const BeliefSystem& belief,
    const std::vector<double>& delta_r_grid,
    const std::vector<double>& delta_o_grid, const QuadratureSpec& spec) {
  check_spec(spec);
  if (delta_r_grid.empty() || delta_o_grid.empty())
    throw std::invalid_argument("adjustment grids must be non-empty");
  for (double d : delta_r_grid)
    if (!std::isfinite(d))
      throw std::invalid_argument("rollout grid has a non-finite entry");
  for (double d : delta_o_grid)
    if (!std::isfinite(d))
      throw std::invalid_argument("operational grid has a non-finite entry");

  const double s0 = std::sqrt(belief.prior.v0);
  const double sm = std::sqrt(belief.v_m);
  const double st = std::sqrt(belief.v_tilde);
  const double root2 = std::sqrt(2.0);
  const auto& outer = gauss_legendre_cached(spec.outer_nodes);
  const auto& inner = gauss_hermite_cached(spec.inner_nodes);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

  // Fixed part: expected payoff of shipping the true effect whenever it
  // helps. The marginal law of the effect is the prior, so this is a
  // one-dimensional integral independent of the adjustments.
  const double ceiling = segment_expectation(
      [&](double t) { return oracle_at(model, t); }, belief.prior.m0, s0,
      std::max(0.0, belief.prior.m0 - spec.tail_sd * s0),
      belief.prior.m0 + spec.tail_sd * s0, outer);

  // Moving part: expected payoff actually collected above the rollout
  // threshold. The inner integrand is smooth over the whole effect axis,
  // so plain Gauss-Hermite handles it.
  const auto value_given_mean = [&](double m, double shift) {
    std::vector<double> terms(inner.x.size());
    for (std::size_t k = 0; k < inner.x.size(); ++k) {
      const double tau = m + root2 * st * inner.x[k];
      terms[k] = inner.w[k] * model.value(m + shift, tau);
    }
    return inv_sqrt_pi * pairwise_sum(terms);
  };

  const double lo = belief.prior.m0 - spec.tail_sd * sm;
  const double hi = belief.prior.m0 + spec.tail_sd * sm;
  std::vector<std::vector<double>> totals(
      delta_r_grid.size(), std::vector<double>(delta_o_grid.size(), 0.0));
  for (std::size_t i = 0; i < delta_r_grid.size(); ++i) {
    const double cut = std::max(lo, -delta_r_grid[i]);
    for (std::size_t j = 0; j < delta_o_grid.size(); ++j) {
      const double collected = segment_expectation(
          [&](double m) { return value_given_mean(m, delta_o_grid[j]); },
          belief.prior.m0, sm, cut, hi, outer);
      totals[i][j] = ceiling - collected;
    }
  }
  return totals;
}

}  // namespace patro
