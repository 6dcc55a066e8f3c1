// adjust.cpp

#include "patro/adjust.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "patro/math.hpp"

namespace patro {

namespace {

double bracket_width(const SolverConfig& cfg, const BeliefSystem& belief) {
  if (cfg.bracket_halfwidth > 0.0) return cfg.bracket_halfwidth;
  return 10.0 * std::sqrt(belief.v_tilde);
}

// Solves h(x) = 0 for a monotone h by bracketed bisection plus secant.
// The bracket is centered on a leading-order guess; adjustments live
// within a few posterior standard deviations of it, so one tenfold
// widening is the only retry. |h(center)| <= tol short-circuits, which
// also covers payoffs whose condition holds identically at the guess.
double solve_monotone_foc(const std::function<double(double)>& h,
                          double center, double halfwidth, double f_tol,
                          const char* what) {
  const double hc = h(center);
  if (std::abs(hc) <= f_tol) return center;
  double w = halfwidth;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double lo = center - w;
    const double hi = center + w;
    const double flo = h(lo);
    const double fhi = h(hi);
    if ((flo > 0.0) != (fhi > 0.0)) {
      RootResult root = find_root(h, lo, hi, f_tol);
      if (!root.converged) {
        throw std::runtime_error(std::string(what) +
                                 ": root refinement did not converge");
      }
      return root.x;
    }
    w *= 10.0;
  }
  throw std::runtime_error(
      std::string(what) + ": no sign change within the widened bracket around " +
      std::to_string(center));
}

// Rollout first-order condition given an operational shift o: the
// posterior expected payoff at the threshold posterior mean, as a
// function of the rollout shift.
double rollout_solve_given(const SnrModel& model, const BeliefSystem& belief,
                           double o, const SolverConfig& cfg,
                           const QuadratureSpec& spec) {
  auto h = [&](double d) {
    return conditional_expectation(
        belief, [&](double tau) { return model.value(-d + o, tau); }, -d,
        spec);
  };
  double center = 0.0;
  // Center the bracket on the leading-order location when available.
  try {
    center = rollout_asymptotic(model, belief);
  } catch (const std::runtime_error&) {
    center = 0.0;
  }
  if (!std::isfinite(center)) center = 0.0;
  const double f_tol = cfg.root_tol * static_cast<double>(model.scale_n());
  return solve_monotone_foc(h, center, bracket_width(cfg, belief), f_tol,
                            "solve_rollout");
}

}  // namespace

double solve_rollout_single(const SnrModel& model, const BeliefSystem& belief,
                            const SolverConfig& cfg,
                            const QuadratureSpec& spec) {
  return rollout_solve_given(model, belief, 0.0, cfg, spec);
}

double rollout_asymptotic(const SnrModel& model, const BeliefSystem& belief) {
  const double slope = model.partial(0, 1, 0.0, 0.0);
  if (slope == 0.0) {
    throw std::runtime_error(
        "rollout_asymptotic: payoff slope at zero vanishes");
  }
  return model.partial(0, 2, 0.0, 0.0) * belief.v_tilde / (2.0 * slope);
}

double solve_operational(const SnrModel& model, const BeliefSystem& belief,
                         double r_shift, const SolverConfig& cfg,
                         const QuadratureSpec& spec) {
  auto g = [&](double delta) {
    return truncated_joint_expectation(
        belief,
        [&](double tau, double m) {
          return model.partial(1, 0, m + delta, tau);
        },
        -r_shift, spec);
  };
  const double f_tol = cfg.root_tol * static_cast<double>(model.scale_n());
  double center = 0.0;
  try {
    center = operational_asymptotic(model, belief, r_shift, spec);
  } catch (const std::runtime_error&) {
    center = 0.0;
  }
  if (!std::isfinite(center)) center = 0.0;
  const double w = bracket_width(cfg, belief);
  // A payoff that ignores the estimate satisfies the condition for every
  // shift; detect that and return the no-adjustment convention.
  if (std::abs(g(center)) <= f_tol && std::abs(g(center - w)) <= f_tol &&
      std::abs(g(center + w)) <= f_tol) {
    return 0.0;
  }
  return solve_monotone_foc(g, center, w, f_tol, "solve_operational");
}

double operational_asymptotic(const SnrModel& model,
                              const BeliefSystem& belief, double r_shift,
                              const QuadratureSpec& spec) {
  const double num = truncated_joint_expectation(
      belief,
      [&](double tau, double) { return model.partial(1, 2, tau, tau); },
      -r_shift, spec);
  const double den = truncated_joint_expectation(
      belief,
      [&](double tau, double) { return model.partial(2, 0, tau, tau); },
      -r_shift, spec);
  const double tiny = 1e-12 * static_cast<double>(model.scale_n());
  if (std::abs(num) <= tiny) return 0.0;
  if (std::abs(den) <= tiny) {
    throw std::runtime_error(
        "operational_asymptotic: non-degenerate curvature interaction "
        "violated, the truncated expected plug-in curvature vanishes");
  }
  return -belief.v_tilde * num / (2.0 * den);
}

AdjustmentPair solve_dual(const SnrModel& model, const BeliefSystem& belief,
                          const SolverConfig& cfg, const QuadratureSpec& spec,
                          DualConditions* conditions,
                          std::vector<std::pair<double, double>>* trace) {
  if (conditions != nullptr) {
    const double n_scale = static_cast<double>(model.scale_n());
    conditions->c1 =
        -truncated_joint_expectation(
            belief,
            [&](double tau, double m) { return model.partial(2, 0, m, tau); },
            0.0, spec) /
        n_scale;
    conditions->c2 = std::abs(conditional_expectation(
                         belief,
                         [&](double tau) {
                           return model.partial(1, 0, 0.0, tau) +
                                  model.partial(0, 1, 0.0, tau);
                         },
                         0.0, spec)) /
                     n_scale;
    conditions->c1_ok = conditions->c1 > 0.0;
    conditions->c2_ok = conditions->c2 > 0.0;
  }

  AdjustmentPair pair;
  double r = 0.0;
  double o = 0.0;
  if (trace != nullptr) trace->push_back({r, o});
  bool converged = false;
  int k = 0;
  for (; k < cfg.max_alt_iters; ++k) {
    const double o_next = solve_operational(model, belief, r, cfg, spec);
    const double r_next = rollout_solve_given(model, belief, o_next, cfg, spec);
    const double move = std::abs(r_next - r) + std::abs(o_next - o);
    r = r_next;
    o = o_next;
    if (trace != nullptr) trace->push_back({r, o});
    if (move < cfg.alt_tol) {
      converged = true;
      ++k;
      break;
    }
  }
  pair.delta_r = r;
  pair.delta_o = o;
  pair.iterations = k;
  pair.converged = converged;
  // Fresh residuals of both conditions at the returned pair.
  pair.residuals.first = conditional_expectation(
      belief, [&](double tau) { return model.value(-r + o, tau); }, -r, spec);
  pair.residuals.second = truncated_joint_expectation(
      belief,
      [&](double tau, double m) { return model.partial(1, 0, m + o, tau); },
      -r, spec);
  // The operational payoff may be flat in the estimate, in which case
  // its residual is identically zero and no further polish is needed.
  const double f_tol = cfg.root_tol * static_cast<double>(model.scale_n());
  if (converged && std::abs(pair.residuals.second) > f_tol) {
    pair.delta_o = solve_operational(model, belief, r, cfg, spec);
    pair.iterations += 1;
    pair.residuals.second = truncated_joint_expectation(
        belief,
        [&](double tau, double m) {
          return model.partial(1, 0, m + pair.delta_o, tau);
        },
        -r, spec);
  }
  return pair;
}

const char* to_string(Interaction interaction) {
  switch (interaction) {
    case Interaction::Substitutes:
      return "substitutes";
    case Interaction::Complements:
      return "complements";
    default:
      return "neutral";
  }
}

Interaction classify_interaction(double single_r, double dual_r) {
  if (!std::isfinite(single_r) || !std::isfinite(dual_r)) {
    throw std::invalid_argument("classify_interaction: non-finite input");
  }
  const double tie_eps = 1e-12 * std::max(1.0, std::abs(single_r));
  if (std::abs(dual_r) < std::abs(single_r) - tie_eps) {
    return Interaction::Substitutes;
  }
  if (std::abs(dual_r) > std::abs(single_r) + tie_eps) {
    return Interaction::Complements;
  }
  return Interaction::Neutral;
}

}  // namespace patro
