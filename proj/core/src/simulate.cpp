// simulate.cpp
#include "patro/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "patro/math.hpp"

namespace patro {
namespace {

// Unbiased integer draw from [0, bound) by rejection.
std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t u;
  do {
    u = rng.next_u64();
  } while (u >= limit);
  return u % bound;
}

}  // namespace

ExperimentSample generate(const ExperimentDesign& design,
                          const NoiseModel& noise, double tau_true,
                          std::uint64_t seed) {
  if (design.n < 2) throw std::invalid_argument("need at least two units");
  if (!(design.gamma > 0.0))
    throw std::invalid_argument("treated/control ratio must be positive");
  if (!(noise.sigma_eps > 0.0))
    throw std::invalid_argument("outcome noise must be positive");
  if (!std::isfinite(tau_true))
    throw std::invalid_argument("true effect must be finite");

  const long n = design.n;
  const long n1 =
      std::lround(static_cast<double>(n) * design.gamma / (1.0 + design.gamma));
  const long n0 = n - n1;
  if (n1 < 1 || n0 < 1)
    throw std::invalid_argument("group sizes round to an empty group");

  // Separate sub-streams keep the assignment independent of the noise,
  // mirroring the design assumption the estimator relies on.
  Rng assign_rng(Rng::derive(seed, 0));
  Rng noise_rng(Rng::derive(seed, 1));

  std::vector<int> w(static_cast<std::size_t>(n), 0);
  std::vector<long> order(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (long i = 0; i < n1; ++i) {
    const auto j = static_cast<long>(
        draw_below(assign_rng, static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(i + j)]);
    w[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  }

  ExperimentSample sample;
  sample.n1 = static_cast<int>(n1);
  sample.n0 = static_cast<int>(n0);
  sample.outcomes.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < sample.outcomes.size(); ++i) {
    sample.outcomes[i].w = w[i];
    sample.outcomes[i].y = noise.b + tau_true * w[i] +
                           noise.sigma_eps * noise_rng.normal();
  }
  return sample;
}

double naive_estimate(const ExperimentSample& sample) {
  double sum1 = 0.0, sum0 = 0.0;
  long c1 = 0, c0 = 0;
  for (const auto& obs : sample.outcomes) {
    if (obs.w) {
      sum1 += obs.y;
      ++c1;
    } else {
      sum0 += obs.y;
      ++c0;
    }
  }
  if (c1 == 0 || c0 == 0)
    throw std::invalid_argument("both groups must be nonempty");
  return sum1 / static_cast<double>(c1) - sum0 / static_cast<double>(c0);
}

McRegret run_pipeline(const SnrModel& model, const PriorBelief& prior,
                      const ExperimentDesign& design, const NoiseModel& noise,
                      const AdjustmentPair& pair, long replications,
                      std::uint64_t seed) {
  if (replications < 100)
    throw std::invalid_argument("run_pipeline needs at least 100 replications");

  // Rebuild the design around the realized group sizes so the posterior
  // formulas match the experiment actually generated.
  const long n1 = std::lround(static_cast<double>(design.n) * design.gamma /
                              (1.0 + design.gamma));
  const long n0 = design.n - n1;
  if (n1 < 1 || n0 < 1)
    throw std::invalid_argument("group sizes round to an empty group");
  ExperimentDesign realized = design;
  realized.gamma = static_cast<double>(n1) / static_cast<double>(n0);
  const BeliefSystem belief = build_belief_system(prior, realized, noise);
  const double s0 = std::sqrt(prior.v0);

  double sum[4] = {0.0, 0.0, 0.0, 0.0};
  double sumsq[4] = {0.0, 0.0, 0.0, 0.0};
  for (long rep = 0; rep < replications; ++rep) {
    const std::uint64_t rep_seed = Rng::derive(seed, static_cast<std::uint64_t>(rep));
    Rng rng(rep_seed);
    const double tau = prior.m0 + s0 * rng.normal();
    const ExperimentSample sample =
        generate(realized, noise, tau, Rng::derive(rep_seed, 1));
    const Posterior post = posterior_update(belief, naive_estimate(sample));

    double one = 0.0, two = 0.0, op = 0.0;
    if (post.m_tilde + pair.delta_r > 0.0) {
      const double realized_snr = model.value(post.m_tilde + pair.delta_o, tau);
      if (tau < 0.0) {
        one = -realized_snr;
      } else {
        op = model.oracle_value(tau) - realized_snr;
      }
    } else if (tau > 0.0) {
      two = model.oracle_value(tau);
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
  const double n = static_cast<double>(replications);
  for (int c = 0; c < 4; ++c) {
    const double mean = sum[c] / n;
    const double var = std::max(0.0, sumsq[c] / n - mean * mean);
    *means[c] = mean;
    *errs[c] = std::sqrt(var / n);
  }
  return out;
}

McEstimate raw_newsvendor_payoff(const NewsvendorSnr& model, double tau_hat,
                                 double tau, long draws, std::uint64_t seed) {
  if (draws < 10000)
    throw std::invalid_argument(
        "raw_newsvendor_payoff needs at least 10^4 draws");
  if (!std::isfinite(tau_hat) || !std::isfinite(tau))
    throw std::invalid_argument("effects must be finite");

  const double sigma = model.sigma_eps();
  const double q1 = model.mu() + tau_hat + sigma * model.z_cr();
  const double q0 = model.mu() + sigma * model.z_cr();
  const double units = static_cast<double>(model.scale_n());
  Rng rng(seed);

  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < draws; ++i) {
    const double z = rng.normal();
    const double x1 = model.mu() + tau + sigma * z;
    const double x0 = model.mu() + sigma * z;
    const double treated = model.p() * x1 -
                           model.c_o() * std::max(0.0, q1 - x1) -
                           model.c_u() * std::max(0.0, x1 - q1);
    const double status_quo = model.p() * x0 -
                              model.c_o() * std::max(0.0, q0 - x0) -
                              model.c_u() * std::max(0.0, x0 - q0);
    const double d = units * (treated - status_quo);
    sum += d;
    sumsq += d * d;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

}  // namespace patro
