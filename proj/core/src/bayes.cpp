// bayes.cpp
#include "patro/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "patro/math.hpp"

namespace patro {
namespace {

// Posterior expectation of q(tau) given the posterior mean, over the
// full effect axis.
double posterior_expectation(const std::function<double(double)>& q, double m,
                             double v_tilde, const QuadRule& gh) {
  const double scale = std::sqrt(2.0 * v_tilde);
  std::vector<double> terms(gh.x.size());
  for (std::size_t k = 0; k < gh.x.size(); ++k)
    terms[k] = gh.w[k] * q(m + scale * gh.x[k]);
  return pairwise_sum(terms) / std::sqrt(std::numbers::pi);
}

// Panel edges for integrating q only where it is positive: [lo, hi]
// plus every sign change located by a scan. Payoffs that are quadratic
// in the posterior mean make the rollout region a union of intervals,
// so a single threshold is not enough.
std::vector<double> sign_change_edges(const std::function<double(double)>& q,
                                      double lo, double hi, double f_tol) {
  constexpr int kScan = 128;
  std::vector<double> edges{lo};
  double x_prev = lo;
  double q_prev = q(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double x = lo + (hi - lo) * k / kScan;
    const double qx = q(x);
    if ((q_prev > 0.0) != (qx > 0.0))
      edges.push_back(find_root(q, x_prev, x, f_tol, 1e-12).x);
    x_prev = x;
    q_prev = qx;
  }
  edges.push_back(hi);
  return edges;
}

// Integral of q(m) against the N(mean, sd^2) density over [a, b].
double density_segment(const std::function<double(double)>& q, double mean,
                       double sd, double a, double b, const QuadRule& gl) {
  if (!(b > a)) return 0.0;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> terms(gl.x.size());
  for (std::size_t k = 0; k < gl.x.size(); ++k) {
    const double m = mid + half * gl.x[k];
    terms[k] = gl.w[k] * half * normal_pdf((m - mean) / sd) / sd * q(m);
  }
  return pairwise_sum(terms);
}

}  // namespace

BayesDecision bayes_decide(const SnrModel& model, const BeliefSystem& belief,
                           double m, const QuadratureSpec& spec) {
  check_spec(spec);
  if (!std::isfinite(m))
    throw std::invalid_argument("posterior mean must be finite");

  const auto& gh = gauss_hermite_cached(spec.inner_nodes);
  const auto slope = [&](double x) {
    return posterior_expectation(
        [&](double tau) { return model.partial(1, 0, x, tau); }, m,
        belief.v_tilde, gh);
  };

  const double f_tol = 1e-10 * model.scale_n();
  double width = 10.0 * std::sqrt(belief.v_tilde);
  double x_star = m;
  // A payoff that does not react to the plug-in effect leaves the
  // first-order condition identically zero; keep the mean in that case.
  const bool flat = std::abs(slope(m)) <= f_tol &&
                    std::abs(slope(m - width)) <= f_tol &&
                    std::abs(slope(m + width)) <= f_tol;
  if (!flat) {
    bool solved = false;
    for (int attempt = 0; attempt < 3 && !solved; ++attempt, width *= 10.0) {
      const double lo = m - width;
      const double hi = m + width;
      if (slope(lo) * slope(hi) > 0.0) continue;
      const auto root = find_root(slope, lo, hi, f_tol);
      if (!root.converged)
        throw std::runtime_error(
            "posterior payoff maximization did not converge");
      x_star = root.x;
      solved = true;
    }
    if (!solved)
      throw std::runtime_error(
          "no bracket for the posterior payoff first-order condition");
  }

  BayesDecision out;
  out.effective_effect = x_star;
  out.posterior_value = posterior_expectation(
      [&](double tau) { return model.value(x_star, tau); }, m, belief.v_tilde,
      gh);
  out.rollout = out.posterior_value > 0.0;
  return out;
}

double bayes_prior_regret(const SnrModel& model, const BeliefSystem& belief,
                          const QuadratureSpec& spec) {
  check_spec(spec);
  const double s0 = std::sqrt(belief.prior.v0);
  const double sm = std::sqrt(belief.v_m);
  const auto& gl = gauss_legendre_cached(spec.outer_nodes);

  const double ceiling = density_segment(
      [&](double t) { return model.oracle_value(t); }, belief.prior.m0, s0,
      std::max(0.0, belief.prior.m0 - spec.tail_sd * s0),
      belief.prior.m0 + spec.tail_sd * s0, gl);

  const double lo = belief.prior.m0 - spec.tail_sd * sm;
  const double hi = belief.prior.m0 + spec.tail_sd * sm;
  const auto value_star = [&](double m) {
    return bayes_decide(model, belief, m, spec).posterior_value;
  };

  double collected = 0.0;
  const auto edges = sign_change_edges(value_star, lo, hi,
                                       1e-12 * model.scale_n());
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    if (b > a && value_star(0.5 * (a + b)) > 0.0)
      collected += density_segment(value_star, belief.prior.m0, sm, a, b, gl);
  }
  return ceiling - collected;
}

double patro_bayes_gap(const SnrModel& model, const BeliefSystem& belief,
                       const AdjustmentPair& pair, const QuadratureSpec& spec) {
  check_spec(spec);
  if (!std::isfinite(pair.delta_r) || !std::isfinite(pair.delta_o))
    throw std::invalid_argument("adjustments must be finite");

  const double sm = std::sqrt(belief.v_m);
  const double lo = belief.prior.m0 - spec.tail_sd * sm;
  const double hi = belief.prior.m0 + spec.tail_sd * sm;
  const auto& gl = gauss_legendre_cached(spec.outer_nodes);
  const auto& gh = gauss_hermite_cached(spec.inner_nodes);

  const auto value_star = [&](double m) {
    return bayes_decide(model, belief, m, spec).posterior_value;
  };
  const auto value_patro = [&](double m) {
    return posterior_expectation(
        [&](double tau) { return model.value(m + pair.delta_o, tau); }, m,
        belief.v_tilde, gh);
  };

  // Integrate both collected payoffs over the same panels so the
  // regret difference inherits a shared discretization error.
  const double cut_patro = std::clamp(-pair.delta_r, lo, hi);
  auto edges =
      sign_change_edges(value_star, lo, hi, 1e-12 * model.scale_n());
  edges.push_back(cut_patro);
  std::sort(edges.begin(), edges.end());
  double w_patro = 0.0;
  double w_bayes = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    if (mid > cut_patro)
      w_patro += density_segment(value_patro, belief.prior.m0, sm, a, b, gl);
    if (value_star(mid) > 0.0)
      w_bayes += density_segment(value_star, belief.prior.m0, sm, a, b, gl);
  }

  const double s0 = std::sqrt(belief.prior.v0);
  const double ceiling = density_segment(
      [&](double t) { return model.oracle_value(t); }, belief.prior.m0, s0,
      std::max(0.0, belief.prior.m0 - spec.tail_sd * s0),
      belief.prior.m0 + spec.tail_sd * s0, gl);

  const double regret_bayes = ceiling - w_bayes;
  if (!(regret_bayes > 0.0))
    throw std::runtime_error("Bayes regret is not positive; gap undefined");
  const double regret_patro = ceiling - w_patro;
  return 100.0 * (regret_patro - regret_bayes) / regret_bayes;
}

}  // namespace patro
