#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <patro/adjust.hpp>
#include <patro/belief.hpp>
#include <patro/regret.hpp>
#include <patro/simulate.hpp>
#include <patro/snr.hpp>

#include "oracles.hpp"

using namespace patro;

TEST_SUITE("simulate") {

TEST_CASE("group sizes follow the rounded allocation ratio") {
  const ExperimentSample even = generate({50, 1.0}, {1.0, 0.0}, 0.0, 1);
  CHECK(even.n1 == 25);
  CHECK(even.n0 == 25);
  const ExperimentSample skewed = generate({30, 0.5}, {1.0, 0.0}, 0.0, 1);
  CHECK(skewed.n1 == 10);
  CHECK(skewed.n0 == 20);
  int treated = 0;
  for (const auto& obs : skewed.outcomes) treated += obs.w;
  CHECK(treated == 10);
  CHECK(static_cast<int>(skewed.outcomes.size()) == 30);
}

TEST_CASE("degenerate designs and inputs are rejected") {
  CHECK_THROWS_AS(generate({2, 0.2}, {1.0, 0.0}, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate({1, 1.0}, {1.0, 0.0}, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate({50, -1.0}, {1.0, 0.0}, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate({50, 1.0}, {0.0, 0.0}, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      generate({50, 1.0}, {1.0, 0.0},
               std::numeric_limits<double>::quiet_NaN(), 1),
      std::invalid_argument);
}

TEST_CASE("generation is deterministic and seed sensitive") {
  const ExperimentSample a = generate({20, 1.0}, {1.0, 2.0}, 0.4, 77);
  const ExperimentSample b = generate({20, 1.0}, {1.0, 2.0}, 0.4, 77);
  const ExperimentSample c = generate({20, 1.0}, {1.0, 2.0}, 0.4, 78);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  bool identical = true;
  bool differs_from_c = false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    identical = identical && a.outcomes[i].y == b.outcomes[i].y &&
                a.outcomes[i].w == b.outcomes[i].w;
    differs_from_c =
        differs_from_c || a.outcomes[i].y != c.outcomes[i].y;
  }
  CHECK(identical);
  CHECK(differs_from_c);
}

TEST_CASE("difference in means on constructed samples") {
  ExperimentSample sample;
  sample.n1 = 2;
  sample.n0 = 2;
  sample.outcomes = {{12.2, 1}, {10.1, 0}, {12.0, 1}, {9.9, 0}};
  CHECK(std::abs(naive_estimate(sample) - 2.1) < 1e-12);
  for (auto& obs : sample.outcomes) obs.y = 4.0;
  CHECK(naive_estimate(sample) == 0.0);
  for (auto& obs : sample.outcomes) obs.w = 1;
  CHECK_THROWS_AS(naive_estimate(sample), std::invalid_argument);
}

TEST_CASE("estimate is invariant to the baseline level") {
  const ExperimentSample low = generate({40, 1.0}, {1.5, 0.0}, 0.3, 5);
  const ExperimentSample high = generate({40, 1.0}, {1.5, 9.0}, 0.3, 5);
  CHECK(std::abs(naive_estimate(low) - naive_estimate(high)) < 1e-12);
}

TEST_CASE("estimator follows its sampling law") {
  // Fixed effect, many experiments: the difference in means is normal
  // with mean tau and variance sigma^2 (1+gamma)^2 / (gamma n).
  const long reps = 100000;
  const double tau = 0.3;
  const double want_var = 1.0 * 4.0 / 50.0;
  std::vector<double> z(reps);
  double mean = 0.0;
  for (long k = 0; k < reps; ++k) {
    const double est = naive_estimate(
        generate({50, 1.0}, {1.0, 2.0}, tau, static_cast<std::uint64_t>(k)));
    z[k] = est;
    mean += est;
  }
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (double e : z) var += (e - mean) * (e - mean);
  var /= static_cast<double>(reps - 1);
  const double se_mean = std::sqrt(want_var / reps);
  CHECK(std::abs(mean - tau) <= 3.0 * se_mean);
  CHECK(std::abs(var - want_var) <= 0.02 * want_var);
  for (double& e : z) e = (e - tau) / std::sqrt(want_var);
  CHECK(oracle::ks_distance_normal(z) <=
        1.75 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("posterior residuals are standard normal within mean bins") {
  // The estimation error m_tilde - tau is independent of m_tilde, so the
  // standardized residual stays N(0,1) after conditioning on any bin.
  const long reps = 200000;
  const PriorBelief prior{0.0, 1.0};
  const ExperimentDesign design{20, 1.0};
  const NoiseModel noise{1.0, 0.0};
  const BeliefSystem belief = build_belief_system(prior, design, noise);
  const double st = std::sqrt(belief.v_tilde);
  oracle::Sampler prior_draws(404);
  struct Bin {
    double lo, hi;
    std::vector<double> z;
  };
  std::vector<Bin> bins = {{-0.1, 0.1, {}}, {0.3, 0.5, {}}, {-0.6, -0.35, {}}};
  for (long k = 0; k < reps; ++k) {
    const double tau = prior.m0 + std::sqrt(prior.v0) * prior_draws.normal();
    const ExperimentSample sample =
        generate(design, noise, tau, static_cast<std::uint64_t>(k) + 1000);
    const Posterior post = posterior_update(belief, naive_estimate(sample));
    for (Bin& bin : bins) {
      if (post.m_tilde > bin.lo && post.m_tilde < bin.hi) {
        bin.z.push_back((tau - post.m_tilde) / st);
      }
    }
  }
  for (Bin& bin : bins) {
    REQUIRE(bin.z.size() > 5000);
    double mean = 0.0;
    for (double v : bin.z) mean += v;
    mean /= static_cast<double>(bin.z.size());
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(bin.z.size())));
    CHECK(oracle::ks_distance_normal(bin.z) <=
          1.80 / std::sqrt(static_cast<double>(bin.z.size())));
  }
}

TEST_CASE("pipeline estimation error has the posterior variance") {
  const long reps = 100000;
  const PriorBelief prior{0.0, 2.0};
  const ExperimentDesign design{10, 1.0};
  const NoiseModel noise{1.0, 0.0};
  const BeliefSystem belief = build_belief_system(prior, design, noise);
  oracle::Sampler prior_draws(505);
  double sum = 0.0, sumsq = 0.0, cross = 0.0, m_sum = 0.0, m_sumsq = 0.0;
  for (long k = 0; k < reps; ++k) {
    const double tau = prior.m0 + std::sqrt(prior.v0) * prior_draws.normal();
    const ExperimentSample sample =
        generate(design, noise, tau, static_cast<std::uint64_t>(k));
    const Posterior post = posterior_update(belief, naive_estimate(sample));
    const double err = post.m_tilde - tau;
    sum += err;
    sumsq += err * err;
    cross += err * post.m_tilde;
    m_sum += post.m_tilde;
    m_sumsq += post.m_tilde * post.m_tilde;
  }
  const double nd = static_cast<double>(reps);
  const double err_mean = sum / nd;
  const double err_var = sumsq / nd - err_mean * err_mean;
  const double m_mean = m_sum / nd;
  const double m_var = m_sumsq / nd - m_mean * m_mean;
  const double cov = cross / nd - err_mean * m_mean;
  const double corr = cov / std::sqrt(err_var * m_var);
  CHECK(std::abs(err_var - belief.v_tilde) <= 0.02 * belief.v_tilde);
  // Independence of the error and the posterior mean.
  CHECK(std::abs(corr) <= 3.0 / std::sqrt(nd));
}

TEST_CASE("pipeline regret agrees with quadrature") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 10);
  const PriorBelief prior{0.0, 2.0};
  const ExperimentDesign design{10, 1.0};
  const NoiseModel noise{1.0, 0.0};
  const BeliefSystem belief = build_belief_system(prior, design, noise);
  const AdjustmentPair pair = solve_dual(model, belief);
  const RegretBreakdown quad =
      prior_expected_regret(model, belief, pair.delta_r, pair.delta_o);
  const McRegret mc =
      run_pipeline(model, prior, design, noise, pair, 100000, 31);
  CHECK(std::abs(mc.mean.type_one - quad.type_one) <=
        4.0 * mc.std_error.type_one);
  CHECK(std::abs(mc.mean.type_two - quad.type_two) <=
        4.0 * mc.std_error.type_two);
  CHECK(std::abs(mc.mean.operational - quad.operational) <=
        4.0 * mc.std_error.operational);
  CHECK(std::abs(mc.mean.total - quad.total) <= 4.0 * mc.std_error.total);
}

TEST_CASE("unadjusted pipeline reproduces the plug-in baseline") {
  // Keep the prior moderate: the service payoff carries exp(2 tau_hat)
  // tails, and a wide prior makes the replication mean so heavy-tailed
  // that its standard error stops being a usable yardstick.
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 1.0, 10);
  const PriorBelief prior{0.0, 1.0};
  const ExperimentDesign design{10, 1.0};
  const NoiseModel noise{1.0, 0.0};
  const BeliefSystem belief = build_belief_system(prior, design, noise);
  const double quad = prior_expected_regret(model, belief, 0.0, 0.0).total;
  const McRegret mc =
      run_pipeline(model, prior, design, noise, AdjustmentPair{}, 100000, 53);
  CHECK(std::abs(mc.mean.total - quad) <= 4.0 * mc.std_error.total);
}

TEST_CASE("pipeline is deterministic and guards its inputs") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 1.0, 10);
  const PriorBelief prior{0.0, 1.0};
  const McRegret a =
      run_pipeline(model, prior, {10, 1.0}, {1.0, 0.0}, {}, 1000, 9);
  const McRegret b =
      run_pipeline(model, prior, {10, 1.0}, {1.0, 0.0}, {}, 1000, 9);
  CHECK(a.mean.total == b.mean.total);
  CHECK(a.std_error.total == b.std_error.total);
  CHECK_THROWS_AS(
      run_pipeline(model, prior, {10, 1.0}, {1.0, 0.0}, {}, 99, 9),
      std::invalid_argument);
  CHECK_THROWS_AS(
      run_pipeline(model, prior, {2, 0.2}, {1.0, 0.0}, {}, 1000, 9),
      std::invalid_argument);
}

TEST_CASE("raw demand draws reproduce the closed-form payoff") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const McEstimate mc = raw_newsvendor_payoff(model, 0.3, 0.5, 1000000, 71);
  const double want = model.value(0.3, 0.5);
  CHECK(std::abs(mc.estimate - want) <= 4.0 * mc.std_error);
  CHECK_THROWS_AS(raw_newsvendor_payoff(model, 0.3, 0.5, 5000, 71),
                  std::invalid_argument);
}

}  // TEST_SUITE
