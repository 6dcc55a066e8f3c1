// config.hpp
// Scenario configuration: a sectioned key-value file naming the payoff
// model, prior, experiment design, noise, and solver settings. Parsing
// is strict; unknown sections or keys are configuration errors.
#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <vector>

#include "patro/adjust.hpp"
#include "patro/belief.hpp"
#include "patro/expectation.hpp"
#include "patro/snr.hpp"

namespace patro {

struct ScenarioConfig {
  std::string kind;  // newsvendor, service, pricing_linear, pricing_loglinear

  // newsvendor
  double price = 0.0;
  double underage = 0.0;
  double overage = 0.0;
  double mu = 0.0;
  // service
  double service_price = 0.0;
  double capacity_cost = 0.0;
  // service and pricing
  double a = 0.0;
  // pricing
  double b_price = 0.0;

  PriorBelief prior;
  ExperimentDesign design;
  std::vector<long> n_list;  // sweep sizes; design.n is the first entry
  NoiseModel noise;
  SolverConfig solver;
  QuadratureSpec quadrature;
  long replications = 100000;
  std::uint64_t seed = 1;

  std::string label;  // optional display name

  // The payoff model at a given experiment size.
  std::unique_ptr<SnrModel> make_model(long n) const;
  BeliefSystem make_belief(long n) const;
};

// Parses a scenario file. Throws std::invalid_argument on syntax
// errors, unknown sections/keys, missing required keys, or values the
// module constructors reject.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& origin);

}  // namespace patro
