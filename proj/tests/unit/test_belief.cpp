#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <patro/belief.hpp>
#include <patro/math.hpp>

#include "oracles.hpp"

using namespace patro;

namespace {

BeliefSystem make(double m0, double v0, double sigma, double gamma, long n) {
  return build_belief_system({m0, v0}, {n, gamma}, {sigma, 0.0});
}

double estimate_sd(double sigma, double gamma, long n) {
  return sigma * (1.0 + gamma) / std::sqrt(gamma * static_cast<double>(n));
}

}  // namespace

TEST_SUITE("belief") {

TEST_CASE("posterior variance matches a dense-grid Bayes update") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  CHECK(std::abs(b.v_tilde - 1.0 / 13.0) < 1e-15);
  CHECK(std::abs(b.v_m - 4.0 / 2.08) < 1e-13);
  const oracle::GridPosterior g =
      oracle::grid_posterior(0.0, 2.0, estimate_sd(1.0, 1.0, 50), 0.9);
  CHECK(std::abs(b.v_tilde - g.var) < 1e-6);

  const BeliefSystem b2 = make(0.0, 5.0, 2.0, 1.0, 10);
  CHECK(std::abs(b2.v_tilde - 1.0 / (0.2 + 0.625)) < 1e-13);
  const oracle::GridPosterior g2 =
      oracle::grid_posterior(0.0, 5.0, estimate_sd(2.0, 1.0, 10), -0.4);
  CHECK(std::abs(b2.v_tilde - g2.var) < 1e-5);
}

TEST_CASE("infinite-data limit drains the posterior variance") {
  const BeliefSystem b = make(0.3, 2.0, 1.0, 1.0, 1000000000L);
  CHECK(b.v_tilde < 1e-8);
  CHECK(std::abs(b.v_m - 2.0) < 1e-8);
}

TEST_CASE("variance decomposition holds across random parameters") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double v0 = 0.05 + 5.0 * u(gen);
    const double sigma = 0.2 + 3.0 * u(gen);
    const double gamma = 0.1 + 3.0 * u(gen);
    const long n = 2 + static_cast<long>(2000 * u(gen));
    const BeliefSystem b = make(-1.0 + 2.0 * u(gen), v0, sigma, gamma, n);
    CHECK(std::abs(b.v_m + b.v_tilde - v0) <= 1e-12 * v0);
    CHECK(b.v_tilde > 0.0);
    CHECK(b.v_m > 0.0);
    CHECK(b.v_tilde < v0);
    CHECK(b.v_m < v0);
  }
}

TEST_CASE("posterior mean shrinks the estimate toward the prior") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  const Posterior post = posterior_update(b, 1.3);
  CHECK(std::abs(post.m_tilde - 1.25) < 1e-14);
  CHECK(post.v_tilde == b.v_tilde);
  const oracle::GridPosterior g =
      oracle::grid_posterior(0.0, 2.0, estimate_sd(1.0, 1.0, 50), 1.3);
  CHECK(std::abs(post.m_tilde - g.mean) < 1e-6);
}

TEST_CASE("updating at the prior mean is a fixed point") {
  const BeliefSystem b = make(0.7, 1.3, 2.0, 0.6, 40);
  CHECK(std::abs(posterior_update(b, 0.7).m_tilde - 0.7) < 1e-14);
}

TEST_CASE("a flat prior hands the estimate straight through") {
  const BeliefSystem b = make(0.0, 1e12, 1.0, 1.0, 50);
  CHECK(std::abs(posterior_update(b, 0.7).m_tilde - 0.7) < 1e-9);
}

TEST_CASE("conditional effect law centers on the realized mean") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  const auto [mean, var] = conditional_effect_law(b, 0.4);
  CHECK(mean == 0.4);
  CHECK(std::abs(var - 1.0 / 13.0) < 1e-15);
  // Identity, not approximation: the mean argument passes through.
  CHECK(conditional_effect_law(b, -3.7).first == -3.7);
  const BeliefSystem tight = make(0.0, 2.0, 1.0, 1.0, 100000000L);
  CHECK(conditional_effect_law(tight, 1.0).second < 1e-6);
}

TEST_CASE("conditional law matches binned joint draws") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  oracle::Sampler sampler(314159);
  const double sm = std::sqrt(b.v_m), st = std::sqrt(b.v_tilde);
  double sum = 0.0, sumsq = 0.0;
  long hits = 0;
  for (long i = 0; i < 10000000L; ++i) {
    const double m = sm * sampler.normal();
    if (std::abs(m - 0.4) > 0.01) continue;
    const double tau = m + st * sampler.normal();
    sum += tau;
    sumsq += tau * tau;
    ++hits;
  }
  REQUIRE(hits > 1000);
  const double mean = sum / hits;
  const double var = sumsq / hits - mean * mean;
  const double se_mean = st / std::sqrt(static_cast<double>(hits));
  CHECK(std::abs(mean - 0.4) < 4.0 * se_mean + 0.01);
  CHECK(std::abs(var - b.v_tilde) < 0.05 * b.v_tilde);
}

TEST_CASE("joint density marginalizes to the posterior-mean law") {
  const BeliefSystem b = make(0.2, 1.5, 1.0, 1.0, 30);
  const double m = 0.45;
  const double st = std::sqrt(b.v_tilde);
  const double marginal = oracle::simpson(
      [&](double tau) { return joint_density(b, tau, m); }, m - 12.0 * st,
      m + 12.0 * st, 20000);
  const double sm = std::sqrt(b.v_m);
  const double expected = oracle::phi((m - 0.2) / sm) / sm;
  CHECK(std::abs(marginal - expected) < 1e-8);
}

TEST_CASE("joint density peaks at the prior mean point") {
  const BeliefSystem b = make(0.2, 1.5, 1.0, 1.0, 30);
  const double mode = joint_density(b, 0.2, 0.2);
  CHECK(std::abs(mode - 1.0 / (2.0 * M_PI * std::sqrt(b.v_m * b.v_tilde))) <
        1e-13);
}

TEST_CASE("joint density box mass matches direct sampling") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  // Box probability by 2-D Simpson of the density.
  const double mass = oracle::simpson(
      [&](double tau) {
        return oracle::simpson(
            [&](double m) { return joint_density(b, tau, m); }, 0.2, 0.8, 400);
      },
      0.0, 1.0, 400);
  oracle::Sampler sampler(271828);
  const double sm = std::sqrt(b.v_m), st = std::sqrt(b.v_tilde);
  const long draws = 1000000;
  long inside = 0;
  for (long i = 0; i < draws; ++i) {
    const double m = sm * sampler.normal();
    const double tau = m + st * sampler.normal();
    if (tau > 0.0 && tau < 1.0 && m > 0.2 && m < 0.8) ++inside;
  }
  const double frac = static_cast<double>(inside) / draws;
  const double se = std::sqrt(mass * (1.0 - mass) / draws);
  CHECK(std::abs(frac - mass) < 3.0 * se);
}

TEST_CASE("estimation error is uncorrelated with the posterior mean") {
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  oracle::Sampler sampler(1717);
  const double sm = std::sqrt(b.v_m), st = std::sqrt(b.v_tilde);
  const long draws = 1000000;
  double se_sum = 0, se_sq = 0, m_sum = 0, m_sq = 0, cross = 0;
  for (long i = 0; i < draws; ++i) {
    const double m = sm * sampler.normal();
    const double tau = m + st * sampler.normal();
    const double err = m - tau;
    se_sum += err;
    se_sq += err * err;
    m_sum += m;
    m_sq += m * m;
    cross += err * m;
  }
  const double n = static_cast<double>(draws);
  const double err_var = se_sq / n - (se_sum / n) * (se_sum / n);
  const double m_var = m_sq / n - (m_sum / n) * (m_sum / n);
  const double cov = cross / n - (se_sum / n) * (m_sum / n);
  const double rho = cov / std::sqrt(err_var * m_var);
  CHECK(std::abs(rho) < 3.0 / std::sqrt(n));
  CHECK(std::abs(err_var - b.v_tilde) < 0.01 * b.v_tilde);
}

TEST_CASE("construction rejects degenerate parameters") {
  CHECK_THROWS_AS(make(0.0, 0.0, 1.0, 1.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(make(0.0, -1.0, 1.0, 1.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(make(0.0, 1.0, 0.0, 1.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(make(0.0, 1.0, 1.0, 0.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(make(0.0, 1.0, 1.0, -0.5, 50), std::invalid_argument);
  CHECK_THROWS_AS(make(0.0, 1.0, 1.0, 1.0, 1), std::invalid_argument);
}

}  // TEST_SUITE
