// snr.hpp
// Surrogate net reward interface: the payoff of implementing with unit
// decisions tuned to an effect estimate when the true effect differs,
// net of the status-quo payoff. Three concrete models (newsvendor,
// service capacity, pricing) plus a numerical assumption validator.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "patro/belief.hpp"

namespace patro {

class SnrModel {
 public:
  virtual ~SnrModel() = default;

  // Payoff of acting on the estimate tau_hat when the truth is tau.
  virtual double value(double tau_hat, double tau) const = 0;

  // Mixed partial of order (i in tau_hat, j in tau), i + j <= 3.
  // partial(0,0,...) returns value(...) exactly. The base implementation
  // differentiates value() with cascaded central stencils so user-defined
  // models only need value(); the built-in models override with closed
  // forms to keep solver first-order conditions smooth.
  virtual double partial(int i, int j, double tau_hat, double tau) const;

  // Payoff under perfect information, value(tau, tau).
  virtual double oracle_value(double tau) const { return value(tau, tau); }

  // The common multiplicative unit count in the payoff.
  virtual long scale_n() const = 0;

  virtual const char* kind() const = 0;

 protected:
  // Central finite differences of value(); first-order step
  // eps^(1/3) * max(1, |argument|), higher orders cascade.
  double fd_partial(int i, int j, double tau_hat, double tau) const;
  static void check_order(int i, int j);
};

// Classic single-period inventory model with asymmetric under/over
// stocking costs. The order quantity targets the critical ratio
// cr = c_u / (c_u + c_o) at the estimated mean demand shift.
class NewsvendorSnr : public SnrModel {
 public:
  NewsvendorSnr(double p, double c_u, double c_o, double mu, double sigma_eps,
                long n);

  double value(double tau_hat, double tau) const override;
  double partial(int i, int j, double tau_hat, double tau) const override;
  long scale_n() const override { return n_; }
  const char* kind() const override { return "newsvendor"; }

  double p() const { return p_; }
  double c_u() const { return c_u_; }
  double c_o() const { return c_o_; }
  double mu() const { return mu_; }
  double sigma_eps() const { return sigma_eps_; }
  double critical_ratio() const { return cr_; }
  double z_cr() const { return z_cr_; }

 private:
  double p_, c_u_, c_o_, mu_, sigma_eps_;
  long n_;
  double cr_, z_cr_;
};

// Capacity planning for a service system: log-normal service times, the
// treatment shifts the log service rate, capacity is set against the
// estimated rate with a quadratic provisioning cost.
class ServiceCapacitySnr : public SnrModel {
 public:
  ServiceCapacitySnr(double p, double s, double a, double sigma_eps, long n);

  double value(double tau_hat, double tau) const override;
  double partial(int i, int j, double tau_hat, double tau) const override;
  long scale_n() const override { return n_; }
  const char* kind() const override { return "service"; }

  double p() const { return p_; }
  double s() const { return s_; }
  double a() const { return a_; }
  double sigma_eps() const { return sigma_eps_; }
  double c0() const { return c0_; }

 private:
  double p_, s_, a_, sigma_eps_;
  long n_;
  double c0_;
};

enum class LambdaKind { Linear, LogLinear };

// Monopoly pricing against a generalized linear demand curve. The two
// supported limits: linear demand (price responds to the estimate, payoff
// linear in the effect) and log-linear demand (optimal price constant,
// payoff independent of the estimate and convex in the effect).
class PricingSnr : public SnrModel {
 public:
  PricingSnr(double a, double b_price, double sigma_eps, LambdaKind lambda_kind,
             long n);

  double value(double tau_hat, double tau) const override;
  double partial(int i, int j, double tau_hat, double tau) const override;
  long scale_n() const override { return n_; }
  const char* kind() const override {
    return lambda_kind_ == LambdaKind::Linear ? "pricing_linear"
                                              : "pricing_loglinear";
  }

  double a() const { return a_; }
  double b_price() const { return b_price_; }
  double sigma_eps() const { return sigma_eps_; }
  LambdaKind lambda_kind() const { return lambda_kind_; }

 private:
  double a_, b_price_, sigma_eps_;
  LambdaKind lambda_kind_;
  long n_;
  double k_;  // log-linear payoff coefficient (n/b) exp(a - 1 + sigma^2/2)
};

struct ClauseResult {
  std::string clause;
  bool pass = false;
  bool applicable = true;  // false: vacuous for this model, see detail
  std::string detail;
};

struct AssumptionReport {
  std::vector<ClauseResult> clauses;
  std::vector<std::string> notes;
  // True when every applicable clause passes.
  bool all_pass() const;
  std::string summary() const;
};

// Checks the regularity conditions the adjustment theory rests on, on a
// grid of effect values: first-order optimality and concavity at the
// truth, expected concavity under truncation, monotone oracle payoff,
// growth spot checks, and monotonicity plus sign change of the posterior
// expected payoff. Reports, never throws on a failed clause.
AssumptionReport validate_assumptions(const SnrModel& model,
                                      const BeliefSystem& belief,
                                      const std::vector<double>& grid);

}  // namespace patro
