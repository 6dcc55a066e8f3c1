#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <patro/adjust.hpp>
#include <patro/belief.hpp>
#include <patro/expectation.hpp>
#include <patro/regret.hpp>
#include <patro/snr.hpp>

#include "oracles.hpp"

using namespace patro;

namespace {

BeliefSystem make(double m0, double v0, double sigma, double gamma, long n) {
  return build_belief_system({m0, v0}, {n, gamma}, {sigma, 0.0});
}

}  // namespace

TEST_SUITE("regret") {

TEST_CASE("newsvendor regret matches the closed form") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  for (double m0 : {-0.2, 0.0, 0.3}) {
    const BeliefSystem b = make(m0, 2.0, 1.0, 1.0, 50);
    for (auto [dr, dob] : {std::pair{0.0, 0.0}, std::pair{-0.1, -0.05},
                           std::pair{0.2, 0.1}}) {
      const double got = prior_expected_regret(model, b, dr, dob).total;
      const double want = oracle::newsvendor_regret(model, b, dr, dob);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("service regret matches the closed form") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 2.0, 10);
  for (double m0 : {-0.1, 0.0, 0.2}) {
    const BeliefSystem b = make(m0, 5.0, 2.0, 1.0, 10);
    for (auto [dr, dob] : {std::pair{0.0, 0.0}, std::pair{0.6, 0.6},
                           std::pair{-0.3, 0.2}}) {
      const double got = prior_expected_regret(model, b, dr, dob).total;
      const double want = oracle::service_regret(model, b, dr, dob);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("log-linear regret matches the closed form") {
  const PricingSnr model(1.0, 1.0, 2.0, LambdaKind::LogLinear, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  for (double dr : {-0.4, 0.0, 0.6060606060606061}) {
    // The payoff ignores the estimate, so the operational shift is inert.
    const double want = oracle::loglinear_regret(model, b, dr);
    CHECK(std::abs(prior_expected_regret(model, b, dr, 0.0).total - want) <=
          1e-9 * std::max(1.0, std::abs(want)));
    CHECK(std::abs(prior_expected_regret(model, b, dr, 0.8).total - want) <=
          1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("regret is the oracle ceiling minus the collected payoff") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const BeliefSystem b = make(0.1, 2.0, 1.0, 1.0, 50);
  const double dr = -0.05, dob = -0.03;
  const double total = prior_expected_regret(model, b, dr, dob).total;
  const double ceiling =
      oracle::prior_oracle_positive(model, b.prior.m0, b.prior.v0);
  const double collected = truncated_joint_expectation(
      b, [&](double tau, double m) { return model.value(m + dob, tau); }, -dr);
  CHECK(std::abs(total - (ceiling - collected)) <=
        1e-8 * std::max(1.0, std::abs(total)));
}

TEST_CASE("breakdown components are nonnegative and sum to the total") {
  const ServiceCapacitySnr sv(2.0, 0.5, 1.0, 2.0, 10);
  const NewsvendorSnr nv(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const BeliefSystem bs = make(0.0, 5.0, 2.0, 1.0, 10);
  const BeliefSystem bn = make(0.0, 2.0, 1.0, 1.0, 50);
  for (auto [dr, dob] : {std::pair{0.0, 0.0}, std::pair{0.3, 0.3},
                         std::pair{-0.2, 0.1}}) {
    for (int which : {0, 1}) {
      const RegretBreakdown r =
          which == 0 ? prior_expected_regret(sv, bs, dr, dob)
                     : prior_expected_regret(nv, bn, dr, dob);
      CHECK(r.type_one >= -1e-12);
      CHECK(r.type_two >= -1e-12);
      CHECK(r.operational >= -1e-12);
      CHECK(std::abs(r.total - (r.type_one + r.type_two + r.operational)) <=
            1e-10 * std::max(1.0, std::abs(r.total)));
    }
  }
}

TEST_CASE("extreme thresholds collapse the right components") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 2.0, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  // Never roll out: all regret is missed gain.
  const RegretBreakdown never =
      prior_expected_regret(model, b, -1e6, 0.0);
  CHECK(never.type_one == 0.0);
  CHECK(never.operational == 0.0);
  const double ceiling =
      oracle::prior_oracle_positive(model, b.prior.m0, b.prior.v0);
  CHECK(std::abs(never.type_two - ceiling) <=
        1e-7 * std::max(1.0, std::abs(ceiling)));
  // Always roll out: nothing is ever withheld.
  const RegretBreakdown always = prior_expected_regret(model, b, 1e6, 0.0);
  CHECK(always.type_two == 0.0);
  CHECK(always.type_one > 0.0);
  CHECK(always.operational > 0.0);
}

TEST_CASE("Monte Carlo regret agrees with quadrature componentwise") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 50);
  const RegretBreakdown quad = prior_expected_regret(model, b, -0.07, -0.05);
  const McRegret mc = monte_carlo_regret(model, b, -0.07, -0.05, 1000000, 17);
  CHECK(std::abs(mc.mean.type_one - quad.type_one) <=
        4.0 * mc.std_error.type_one);
  CHECK(std::abs(mc.mean.type_two - quad.type_two) <=
        4.0 * mc.std_error.type_two);
  CHECK(std::abs(mc.mean.operational - quad.operational) <=
        4.0 * mc.std_error.operational);
  CHECK(std::abs(mc.mean.total - quad.total) <= 4.0 * mc.std_error.total);
}

TEST_CASE("Monte Carlo regret is deterministic in the seed") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 2.0, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  const McRegret a = monte_carlo_regret(model, b, 0.1, 0.1, 10000, 3);
  const McRegret c = monte_carlo_regret(model, b, 0.1, 0.1, 10000, 3);
  CHECK(a.mean.total == c.mean.total);
  CHECK(a.std_error.total == c.std_error.total);
}

TEST_CASE("guards reject bad arguments") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 2.0, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(prior_expected_regret(model, b, inf, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_regret(model, b, 0.0, 0.0, 5000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(regret_surface(model, b, {}, {0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(regret_surface(model, b, {0.0}, {inf}),
                  std::invalid_argument);
}

TEST_CASE("improvement rates at the small-experiment reference points") {
  // Service row at ten units: the adjusted pair recovers just over five
  // percent of the unadjusted regret.
  const ServiceCapacitySnr sv(2.0, 0.5, 1.0, 1.0, 10);
  const BeliefSystem sv_bs = make(0.0, 1.0, 1.0, 1.0, 10);
  const AdjustmentPair sv_pair = solve_dual(sv, sv_bs);
  CHECK(std::abs(improvement_rate(sv, sv_bs, sv_pair) - 5.1897) < 0.05);
  // Log-linear pricing under a wide prior: a much larger share.
  const BeliefSystem bs = make(0.0, 5.0, 2.0, 1.0, 10);
  const PricingSnr log(1.0, 1.0, 2.0, LambdaKind::LogLinear, 10);
  const AdjustmentPair log_pair = solve_dual(log, bs);
  CHECK(std::abs(improvement_rate(log, bs, log_pair) - 28.8736) < 0.05);
  // Linear pricing takes no adjustment, so there is nothing to recover.
  const PricingSnr lin(1.0, 1.0, 1.0, LambdaKind::Linear, 10);
  const AdjustmentPair lin_pair = solve_dual(lin, bs);
  CHECK(std::abs(improvement_rate(lin, bs, lin_pair)) < 1e-12);
}

TEST_CASE("solved pair sits at the bottom of the regret surface") {
  const PricingSnr model(1.0, 1.0, 2.0, LambdaKind::LogLinear, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  const AdjustmentPair pair = solve_dual(model, b);
  const double w = 3.0 * std::sqrt(b.v_tilde);
  std::vector<double> r_grid, o_grid;
  for (int i = 0; i < 21; ++i) {
    r_grid.push_back(pair.delta_r - w + 2.0 * w * i / 20.0);
    o_grid.push_back(pair.delta_o - w + 2.0 * w * i / 20.0);
  }
  const auto surface = regret_surface(model, b, r_grid, o_grid);
  const double at_pair =
      regret_surface(model, b, {pair.delta_r}, {pair.delta_o})[0][0];
  double grid_min = surface[0][0];
  for (const auto& row : surface) {
    for (double v : row) grid_min = std::min(grid_min, v);
  }
  CHECK(at_pair <= grid_min + 1e-9 * model.scale_n());
  // The surface prices the same policies as the component breakdown.
  const double center = regret_surface(model, b, {0.0}, {0.0})[0][0];
  const double direct = prior_expected_regret(model, b, 0.0, 0.0).total;
  CHECK(std::abs(center - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("regret rises monotonically along rays leaving the minimum") {
  const ServiceCapacitySnr model(2.0, 0.5, 1.0, 2.0, 10);
  const BeliefSystem b = make(0.0, 5.0, 2.0, 1.0, 10);
  const AdjustmentPair pair = solve_dual(model, b);
  const double step = std::sqrt(b.v_tilde) / 2.0;
  std::vector<double> r_ray, o_ray;
  for (int i = 0; i <= 6; ++i) {
    r_ray.push_back(pair.delta_r + step * i);
    o_ray.push_back(pair.delta_o + step * i);
  }
  const auto along_r = regret_surface(model, b, r_ray, {pair.delta_o});
  const auto along_o = regret_surface(model, b, {pair.delta_r}, o_ray);
  for (int i = 1; i <= 6; ++i) {
    CHECK(along_r[i][0] >= along_r[i - 1][0] - 1e-12 * model.scale_n());
    CHECK(along_o[0][i] >= along_o[0][i - 1] - 1e-12 * model.scale_n());
  }
}

TEST_CASE("policy ordering: joint beats singles beats no adjustment") {
  const NewsvendorSnr nv(10.0, 3.0, 25.0, 10.0, 1.0, 50);
  const ServiceCapacitySnr sv(2.0, 0.5, 1.0, 2.0, 10);
  const PricingSnr log(1.0, 1.0, 2.0, LambdaKind::LogLinear, 10);
  const BeliefSystem bn = make(0.0, 2.0, 1.0, 1.0, 50);
  const BeliefSystem bs = make(0.0, 5.0, 2.0, 1.0, 10);
  struct Scenario {
    const SnrModel* model;
    const BeliefSystem* belief;
  };
  for (const Scenario& sc : {Scenario{&nv, &bn}, Scenario{&sv, &bs},
                             Scenario{&log, &bs}}) {
    const double slack = 1e-9 * sc.model->scale_n();
    const AdjustmentPair pair = solve_dual(*sc.model, *sc.belief);
    const double joint =
        prior_expected_regret(*sc.model, *sc.belief, pair.delta_r,
                              pair.delta_o)
            .total;
    const double r_only =
        prior_expected_regret(*sc.model, *sc.belief,
                              solve_rollout_single(*sc.model, *sc.belief), 0.0)
            .total;
    const double o_only =
        prior_expected_regret(*sc.model, *sc.belief, 0.0,
                              solve_operational(*sc.model, *sc.belief, 0.0))
            .total;
    const double none =
        prior_expected_regret(*sc.model, *sc.belief, 0.0, 0.0).total;
    CHECK(joint <= std::min(r_only, o_only) + slack);
    CHECK(std::min(r_only, o_only) <= none + slack);
  }
}

TEST_CASE("large experiments drive the regret to zero") {
  const NewsvendorSnr model(10.0, 3.0, 25.0, 10.0, 1.0, 1000000000);
  const BeliefSystem b = make(0.0, 2.0, 1.0, 1.0, 1000000000);
  const AdjustmentPair pair = solve_dual(model, b);
  const double total =
      prior_expected_regret(model, b, pair.delta_r, pair.delta_o).total;
  // Unit count in the payoff cancels against shrinking per-unit regret.
  CHECK(total / model.scale_n() >= 0.0);
  CHECK(total / model.scale_n() < 1e-6 * 10.0 * std::sqrt(b.prior.v0));
}

TEST_CASE("improvement rate refuses a zero baseline") {
  // Linear pricing with a degenerate prior mean far below zero: both the
  // adjusted and unadjusted policies almost never roll out and the
  // baseline regret underflows to zero at quadrature accuracy.
  const PricingSnr model(1.0, 1.0, 1.0, LambdaKind::Linear, 10);
  const BeliefSystem b = make(-40.0, 0.01, 1.0, 1.0, 1000000);
  CHECK_THROWS_AS(improvement_rate(model, b, AdjustmentPair{}),
                  std::runtime_error);
}

}  // TEST_SUITE
