// commands.cpp
#include "patro/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "patro/bayes.hpp"
#include "patro/config.hpp"
#include "patro/reference.hpp"
#include "patro/regret.hpp"
#include "patro/simulate.hpp"

namespace patro {
namespace {

using nlohmann::json;

std::string real17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  row += '\n';
  return row;
}

void emit(const CommandOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out)
    throw std::invalid_argument("cannot write to '" + opts.out_path + "'");
  out << text;
}

json config_json(const ScenarioConfig& cfg) {
  json model{{"kind", cfg.kind}};
  if (cfg.kind == "newsvendor") {
    model["p"] = cfg.price;
    model["c_u"] = cfg.underage;
    model["c_o"] = cfg.overage;
    model["mu"] = cfg.mu;
  } else if (cfg.kind == "service") {
    model["p"] = cfg.service_price;
    model["s"] = cfg.capacity_cost;
    model["a"] = cfg.a;
  } else {
    model["a"] = cfg.a;
    model["b"] = cfg.b_price;
  }
  return json{
      {"label", cfg.label},
      {"model", model},
      {"prior", {{"m0", cfg.prior.m0}, {"v0", cfg.prior.v0}}},
      {"design", {{"n_list", cfg.n_list}, {"gamma", cfg.design.gamma}}},
      {"noise", {{"sigma_eps", cfg.noise.sigma_eps}, {"b", cfg.noise.b}}},
      {"solver",
       {{"root_tol", cfg.solver.root_tol},
        {"alt_tol", cfg.solver.alt_tol},
        {"max_alt_iters", cfg.solver.max_alt_iters},
        {"bracket_halfwidth", cfg.solver.bracket_halfwidth},
        {"inner_nodes", cfg.quadrature.inner_nodes},
        {"outer_nodes", cfg.quadrature.outer_nodes},
        {"tail_sd", cfg.quadrature.tail_sd}}},
      {"simulate", {{"replications", cfg.replications}}},
      {"seed", cfg.seed}};
}

std::string parameter_summary(const ScenarioConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return std::string(buf);
  };
  if (cfg.kind == "newsvendor")
    out << "p=" << num(cfg.price) << ", c_u=" << num(cfg.underage)
        << ", c_o=" << num(cfg.overage) << ", mu=" << num(cfg.mu);
  else if (cfg.kind == "service")
    out << "p=" << num(cfg.service_price) << ", s=" << num(cfg.capacity_cost)
        << ", a=" << num(cfg.a);
  else
    out << "a=" << num(cfg.a) << ", b=" << num(cfg.b_price);
  out << ", v0=" << num(cfg.prior.v0)
      << ", sigma_eps=" << num(cfg.noise.sigma_eps)
      << ", gamma=" << num(cfg.design.gamma);
  return out.str();
}

ScenarioConfig load_with_seed(const CommandOptions& opts) {
  ScenarioConfig cfg = load_scenario(opts.config_path);
  if (opts.has_seed) cfg.seed = opts.seed;
  return cfg;
}

// FOC residuals of a candidate pair, via the expectation engine: the
// threshold payoff and the truncated plug-in slope.
std::pair<double, double> pair_residuals(const SnrModel& model,
                                         const BeliefSystem& belief,
                                         double delta_r, double delta_o,
                                         const QuadratureSpec& spec) {
  const double at_threshold = conditional_expectation(
      belief,
      [&](double tau) { return model.value(-delta_r + delta_o, tau); },
      -delta_r, spec);
  const double slope = truncated_joint_expectation(
      belief,
      [&](double tau, double m) {
        return model.partial(1, 0, m + delta_o, tau);
      },
      -delta_r, spec);
  return {at_threshold, slope};
}

// Least-squares slope of log|q| against log n, over entries where q is
// meaningfully nonzero. Returns false when fewer than two survive.
bool loglog_slope(const std::vector<long>& n, const std::vector<double>& q,
                  double floor, double* slope) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (std::abs(q[i]) > floor) {
      xs.push_back(std::log(static_cast<double>(n[i])));
      ys.push_back(std::log(std::abs(q[i])));
    }
  }
  if (xs.size() < 2) return false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double k = static_cast<double>(xs.size());
  *slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return true;
}

}  // namespace

int cmd_adjust(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_seed(opts);
  json results = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all_converged = true;

  for (long n : cfg.n_list) {
    const auto model = cfg.make_model(n);
    const BeliefSystem belief = cfg.make_belief(n);
    AdjustmentPair pair;
    double asym_r = 0.0, asym_o = 0.0;
    bool has_asym_r = false, has_asym_o = false;
    std::string interaction;

    if (opts.mode == "rollout") {
      pair.delta_r =
          solve_rollout_single(*model, belief, cfg.solver, cfg.quadrature);
      pair.iterations = 1;
      pair.converged = true;
      asym_r = rollout_asymptotic(*model, belief);
      has_asym_r = true;
    } else if (opts.mode == "operational") {
      pair.delta_o =
          solve_operational(*model, belief, 0.0, cfg.solver, cfg.quadrature);
      pair.iterations = 1;
      pair.converged = true;
      asym_o = operational_asymptotic(*model, belief, 0.0, cfg.quadrature);
      has_asym_o = true;
    } else {
      DualConditions cond;
      pair = solve_dual(*model, belief, cfg.solver, cfg.quadrature, &cond);
      asym_r = rollout_asymptotic(*model, belief);
      has_asym_r = true;
      asym_o = operational_asymptotic(*model, belief, pair.delta_r,
                                      cfg.quadrature);
      has_asym_o = true;
      const double single_r =
          solve_rollout_single(*model, belief, cfg.solver, cfg.quadrature);
      interaction = to_string(classify_interaction(single_r, pair.delta_r));
    }
    all_converged = all_converged && pair.converged;

    const auto residuals = pair_residuals(*model, belief, pair.delta_r,
                                          pair.delta_o, cfg.quadrature);
    json entry{{"n", n},
               {"delta_r", pair.delta_r},
               {"delta_o", pair.delta_o},
               {"iterations", pair.iterations},
               {"converged", pair.converged},
               {"residual_rollout", residuals.first},
               {"residual_operational", residuals.second}};
    if (has_asym_r) entry["asymptotic_delta_r"] = asym_r;
    if (has_asym_o) entry["asymptotic_delta_o"] = asym_o;
    if (!interaction.empty()) entry["interaction"] = interaction;
    results.push_back(entry);

    rows.push_back({std::to_string(n), real17(pair.delta_r),
                    real17(pair.delta_o),
                    has_asym_r ? real17(asym_r) : std::string(),
                    has_asym_o ? real17(asym_o) : std::string(),
                    real17(residuals.first), real17(residuals.second),
                    std::to_string(pair.iterations),
                    pair.converged ? "true" : "false", interaction});
  }

  if (opts.format == "csv") {
    std::string text = csv_row(
        {"n", "delta_r", "delta_o", "asymptotic_delta_r",
         "asymptotic_delta_o", "residual_rollout", "residual_operational",
         "iterations", "converged", "interaction"});
    for (const auto& row : rows) text += csv_row(row);
    emit(opts, text);
  } else {
    const json doc{{"command", "adjust"},
                   {"mode", opts.mode},
                   {"config", config_json(cfg)},
                   {"results", results}};
    emit(opts, doc.dump(2) + "\n");
  }
  if (!all_converged) {
    std::cerr << "adjust: solver did not converge on every size\n";
    return 2;
  }
  return 0;
}

int cmd_table1(const CommandOptions& opts) {
  std::vector<std::size_t> selected;
  if (opts.rows.empty()) {
    for (std::size_t i = 0; i < kReferenceRowCount; ++i) selected.push_back(i);
  } else {
    std::string normalized = opts.rows;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    long index = 0;
    while (in >> index) {
      if (index < 1 || index > static_cast<long>(kReferenceRowCount))
        throw std::invalid_argument("--rows entries must be in 1.." +
                                    std::to_string(kReferenceRowCount));
      selected.push_back(static_cast<std::size_t>(index - 1));
    }
    if (selected.empty())
      throw std::invalid_argument("--rows selects no rows");
  }

  json rows = json::array();
  std::string csv = csv_row({"row", "label", "model", "parameters", "n",
                             "improvement_pct", "reference_pct",
                             "deviation_pp", "within_tolerance", "flag"});
  for (std::size_t idx : selected) {
    const ReferenceRow& ref = kReferenceRows[idx];
    CommandOptions row_opts = opts;
    row_opts.config_path =
        opts.config_path + "/" + ref.config_name + ".cfg";
    const ScenarioConfig cfg = load_scenario(row_opts.config_path);
    const std::string params = parameter_summary(cfg);
    const std::string flag =
        ref.parameter_ambiguous ? "parameter_ambiguous" : "";

    for (long n : cfg.n_list) {
      const auto model = cfg.make_model(n);
      const BeliefSystem belief = cfg.make_belief(n);
      const AdjustmentPair pair =
          solve_dual(*model, belief, cfg.solver, cfg.quadrature);
      const double rate =
          improvement_rate(*model, belief, pair, cfg.quadrature);

      const long* size_at = std::find(std::begin(kReferenceSizes),
                                      std::end(kReferenceSizes), n);
      const bool has_ref = size_at != std::end(kReferenceSizes);
      double ref_rate = 0.0, deviation = 0.0;
      bool within = false;
      if (has_ref) {
        ref_rate = ref.rate[size_at - std::begin(kReferenceSizes)];
        deviation = rate - ref_rate;
        within = std::abs(deviation) <= ref.tolerance_pp;
      }

      json entry{{"row", idx + 1},       {"label", ref.label},
                 {"model", cfg.kind},    {"parameters", params},
                 {"n", n},               {"improvement_pct", rate},
                 {"flag", flag}};
      if (has_ref) {
        entry["reference_pct"] = ref_rate;
        entry["deviation_pp"] = deviation;
        if (!ref.parameter_ambiguous) entry["within_tolerance"] = within;
      }
      rows.push_back(entry);
      csv += csv_row(
          {std::to_string(idx + 1), ref.label, cfg.kind, params,
           std::to_string(n), real17(rate),
           has_ref ? real17(ref_rate) : std::string(),
           has_ref ? real17(deviation) : std::string(),
           has_ref && !ref.parameter_ambiguous ? (within ? "true" : "false")
                                               : std::string(),
           flag});
    }
  }

  if (opts.format == "csv") {
    emit(opts, csv);
  } else {
    emit(opts,
         json{{"command", "table1"}, {"rows", rows}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_sweep(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_seed(opts);
  const std::vector<long> sizes =
      opts.n_list.empty() ? cfg.n_list : opts.n_list;
  for (long n : sizes)
    if (n < 2) throw std::invalid_argument("sweep sizes must be >= 2");

  struct SweepPoint {
    long n;
    double single_r, single_o, dual_r, dual_o;
    RegretBreakdown at_dual;
    double reduction_r, reduction_o, improvement;
  };
  std::vector<SweepPoint> points;
  for (long n : sizes) {
    const auto model = cfg.make_model(n);
    const BeliefSystem belief = cfg.make_belief(n);
    SweepPoint pt;
    pt.n = n;
    pt.single_r =
        solve_rollout_single(*model, belief, cfg.solver, cfg.quadrature);
    pt.single_o =
        solve_operational(*model, belief, 0.0, cfg.solver, cfg.quadrature);
    const AdjustmentPair pair =
        solve_dual(*model, belief, cfg.solver, cfg.quadrature);
    pt.dual_r = pair.delta_r;
    pt.dual_o = pair.delta_o;
    const double base =
        prior_expected_regret(*model, belief, 0.0, 0.0, cfg.quadrature).total;
    pt.at_dual = prior_expected_regret(*model, belief, pair.delta_r,
                                       pair.delta_o, cfg.quadrature);
    pt.reduction_r =
        base -
        prior_expected_regret(*model, belief, pt.single_r, 0.0, cfg.quadrature)
            .total;
    pt.reduction_o =
        base -
        prior_expected_regret(*model, belief, 0.0, pt.single_o, cfg.quadrature)
            .total;
    pt.improvement = base > 0.0 ? 100.0 * (base - pt.at_dual.total) / base
                                : 0.0;
    points.push_back(pt);
  }

  std::vector<long> ns;
  std::vector<double> sr, so, dr, dd, rr, ro;
  for (const auto& pt : points) {
    ns.push_back(pt.n);
    sr.push_back(pt.single_r);
    so.push_back(pt.single_o);
    dr.push_back(pt.dual_r);
    dd.push_back(pt.dual_o);
    rr.push_back(pt.reduction_r);
    ro.push_back(pt.reduction_o);
  }
  const double floor = 1e-12;
  json slopes;
  const auto record = [&](const char* name, const std::vector<double>& q) {
    double slope = 0.0;
    if (loglog_slope(ns, q, floor, &slope))
      slopes[name] = slope;
    else
      slopes[name] = nullptr;
  };
  record("delta_r_single", sr);
  record("delta_o_single", so);
  record("delta_r_dual", dr);
  record("delta_o_dual", dd);
  record("reduction_single_r", rr);
  record("reduction_single_o", ro);

  if (opts.format == "csv") {
    std::string text = csv_row(
        {"row_kind", "n", "delta_r_single", "delta_o_single", "delta_r_dual",
         "delta_o_dual", "n_delta_r_single", "n_delta_o_single",
         "n_delta_r_dual", "n_delta_o_dual", "regret_total",
         "regret_type_one", "regret_type_two", "regret_operational",
         "improvement_pct", "reduction_single_r", "reduction_single_o"});
    for (const auto& pt : points) {
      const double n = static_cast<double>(pt.n);
      text += csv_row({"data", std::to_string(pt.n), real17(pt.single_r),
                       real17(pt.single_o), real17(pt.dual_r),
                       real17(pt.dual_o), real17(n * pt.single_r),
                       real17(n * pt.single_o), real17(n * pt.dual_r),
                       real17(n * pt.dual_o), real17(pt.at_dual.total),
                       real17(pt.at_dual.type_one), real17(pt.at_dual.type_two),
                       real17(pt.at_dual.operational), real17(pt.improvement),
                       real17(pt.reduction_r), real17(pt.reduction_o)});
    }
    const auto slope_field = [&](const char* name) {
      return slopes[name].is_null() ? std::string()
                                    : real17(slopes[name].get<double>());
    };
    text += csv_row({"slope", "", slope_field("delta_r_single"),
                     slope_field("delta_o_single"), slope_field("delta_r_dual"),
                     slope_field("delta_o_dual"), "", "", "", "", "", "", "",
                     "", "", slope_field("reduction_single_r"),
                     slope_field("reduction_single_o")});
    emit(opts, text);
  } else {
    json rows = json::array();
    for (const auto& pt : points) {
      const double n = static_cast<double>(pt.n);
      rows.push_back(
          {{"n", pt.n},
           {"delta_r_single", pt.single_r},
           {"delta_o_single", pt.single_o},
           {"delta_r_dual", pt.dual_r},
           {"delta_o_dual", pt.dual_o},
           {"n_delta_r_single", n * pt.single_r},
           {"n_delta_o_single", n * pt.single_o},
           {"n_delta_r_dual", n * pt.dual_r},
           {"n_delta_o_dual", n * pt.dual_o},
           {"regret",
            {{"total", pt.at_dual.total},
             {"type_one", pt.at_dual.type_one},
             {"type_two", pt.at_dual.type_two},
             {"operational", pt.at_dual.operational}}},
           {"improvement_pct", pt.improvement},
           {"reduction_single_r", pt.reduction_r},
           {"reduction_single_o", pt.reduction_o}});
    }
    const json doc{{"command", "sweep"},
                   {"config", config_json(cfg)},
                   {"rows", rows},
                   {"loglog_slopes", slopes}};
    emit(opts, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_validate(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_seed(opts);
  const long n = cfg.design.n;
  const auto model = cfg.make_model(n);
  const BeliefSystem belief = cfg.make_belief(n);

  std::vector<double> grid;
  const double half = 4.0 * std::sqrt(cfg.prior.v0);
  for (int k = 0; k <= 20; ++k)
    grid.push_back(cfg.prior.m0 - half + 2.0 * half * k / 20.0);
  const AssumptionReport report = validate_assumptions(*model, belief, grid);

  DualConditions cond;
  bool solver_ok = true;
  std::string solver_note;
  try {
    solve_dual(*model, belief, cfg.solver, cfg.quadrature, &cond);
  } catch (const std::exception& e) {
    solver_ok = false;
    solver_note = e.what();
  }

  json clauses = json::array();
  for (const auto& clause : report.clauses)
    clauses.push_back({{"clause", clause.clause},
                       {"pass", clause.pass},
                       {"applicable", clause.applicable},
                       {"detail", clause.detail}});
  json doc{{"command", "validate"},
           {"config", config_json(cfg)},
           {"n", n},
           {"clauses", clauses},
           {"notes", report.notes},
           {"all_pass", report.all_pass()},
           {"contraction",
            {{"evaluated", solver_ok},
             {"c1", cond.c1},
             {"c1_ok", cond.c1_ok},
             {"c2", cond.c2},
             {"c2_ok", cond.c2_ok}}}};
  if (!solver_ok) doc["contraction"]["error"] = solver_note;

  if (opts.format == "json") {
    emit(opts, doc.dump(2) + "\n");
  } else {
    std::ostringstream text;
    text << "assumption report: " << cfg.kind << " (n=" << n << ")\n";
    text << report.summary();
    text << "contraction spot checks at the unadjusted point: ";
    if (solver_ok)
      text << "c1=" << cond.c1 << (cond.c1_ok ? " (ok)" : " (violated)")
           << ", c2=" << cond.c2 << (cond.c2_ok ? " (ok)" : " (violated)")
           << "\n";
    else
      text << "solver failed: " << solver_note << "\n";
    text << (report.all_pass() ? "all clauses pass\n"
                               : "some clauses fail\n");
    emit(opts, text.str());
  }
  return 0;
}

int cmd_benchmark(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_seed(opts);
  const long n = cfg.design.n;
  const auto model = cfg.make_model(n);
  const BeliefSystem belief = cfg.make_belief(n);

  const double single_r =
      solve_rollout_single(*model, belief, cfg.solver, cfg.quadrature);
  const double single_o =
      solve_operational(*model, belief, 0.0, cfg.solver, cfg.quadrature);
  const AdjustmentPair dual =
      solve_dual(*model, belief, cfg.solver, cfg.quadrature);
  const double bayes = bayes_prior_regret(*model, belief, cfg.quadrature);

  struct Policy {
    const char* name;
    AdjustmentPair pair;
  };
  AdjustmentPair pto;
  AdjustmentPair only_r;
  only_r.delta_r = single_r;
  AdjustmentPair only_o;
  only_o.delta_o = single_o;
  const Policy policies[] = {{"pto", pto},
                             {"patro_single_rollout", only_r},
                             {"patro_single_operational", only_o},
                             {"patro_dual", dual}};

  const double base =
      prior_expected_regret(*model, belief, 0.0, 0.0, cfg.quadrature).total;
  json rows = json::array();
  std::string csv = csv_row({"policy", "delta_r", "delta_o", "regret_total",
                             "regret_type_one", "regret_type_two",
                             "regret_operational", "improvement_pct",
                             "gap_to_bayes_pct"});
  double regret_dual = 0.0;
  for (const Policy& policy : policies) {
    const RegretBreakdown breakdown = prior_expected_regret(
        *model, belief, policy.pair.delta_r, policy.pair.delta_o,
        cfg.quadrature);
    if (std::string(policy.name) == "patro_dual")
      regret_dual = breakdown.total;
    const double improvement =
        base > 0.0 ? 100.0 * (base - breakdown.total) / base : 0.0;
    const double gap =
        patro_bayes_gap(*model, belief, policy.pair, cfg.quadrature);
    rows.push_back({{"policy", policy.name},
                    {"delta_r", policy.pair.delta_r},
                    {"delta_o", policy.pair.delta_o},
                    {"regret",
                     {{"total", breakdown.total},
                      {"type_one", breakdown.type_one},
                      {"type_two", breakdown.type_two},
                      {"operational", breakdown.operational}}},
                    {"improvement_pct", improvement},
                    {"gap_to_bayes_pct", gap}});
    csv += csv_row({policy.name, real17(policy.pair.delta_r),
                    real17(policy.pair.delta_o), real17(breakdown.total),
                    real17(breakdown.type_one), real17(breakdown.type_two),
                    real17(breakdown.operational), real17(improvement),
                    real17(gap)});
  }
  rows.push_back({{"policy", "bayes"},
                  {"regret", {{"total", bayes}}},
                  {"improvement_pct",
                   base > 0.0 ? 100.0 * (base - bayes) / base : 0.0},
                  {"gap_to_bayes_pct", 0.0}});
  csv += csv_row({"bayes", "", "", real17(bayes), "", "", "",
                  real17(base > 0.0 ? 100.0 * (base - bayes) / base : 0.0),
                  real17(0.0)});

  const double slack = 1e-9 * model->scale_n();
  const bool ordered = bayes <= regret_dual + slack &&
                       regret_dual <= base + slack;

  if (opts.format == "csv") {
    emit(opts, csv);
  } else {
    const json doc{{"command", "benchmark"},
                   {"config", config_json(cfg)},
                   {"n", n},
                   {"policies", rows},
                   {"bayes_dominance_ok", ordered}};
    emit(opts, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_simulate(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_seed(opts);
  const long n = cfg.design.n;
  const auto model = cfg.make_model(n);
  const BeliefSystem belief = cfg.make_belief(n);
  const AdjustmentPair dual =
      solve_dual(*model, belief, cfg.solver, cfg.quadrature);
  AdjustmentPair pto;

  struct Named {
    const char* name;
    AdjustmentPair pair;
  };
  const Named policies[] = {{"pto", pto}, {"patro_dual", dual}};

  json results = json::array();
  std::string csv = csv_row({"policy", "component", "empirical", "std_error",
                             "quadrature", "z"});
  for (const Named& policy : policies) {
    const McRegret empirical =
        run_pipeline(*model, cfg.prior, cfg.design, cfg.noise, policy.pair,
                     cfg.replications, cfg.seed);
    const RegretBreakdown quad = prior_expected_regret(
        *model, belief, policy.pair.delta_r, policy.pair.delta_o,
        cfg.quadrature);
    const struct {
      const char* name;
      double mean, se, exact;
    } components[] = {
        {"type_one", empirical.mean.type_one, empirical.std_error.type_one,
         quad.type_one},
        {"type_two", empirical.mean.type_two, empirical.std_error.type_two,
         quad.type_two},
        {"operational", empirical.mean.operational,
         empirical.std_error.operational, quad.operational},
        {"total", empirical.mean.total, empirical.std_error.total,
         quad.total},
    };
    json comps;
    for (const auto& c : components) {
      const double z = c.se > 0.0 ? (c.mean - c.exact) / c.se : 0.0;
      comps[c.name] = {{"empirical", c.mean},
                       {"std_error", c.se},
                       {"quadrature", c.exact},
                       {"z", z}};
      csv += csv_row({policy.name, c.name, real17(c.mean), real17(c.se),
                      real17(c.exact), real17(z)});
    }
    results.push_back({{"policy", policy.name},
                       {"delta_r", policy.pair.delta_r},
                       {"delta_o", policy.pair.delta_o},
                       {"components", comps}});
  }

  if (opts.format == "csv") {
    emit(opts, csv);
  } else {
    const json doc{{"command", "simulate"},
                   {"config", config_json(cfg)},
                   {"n", n},
                   {"replications", cfg.replications},
                   {"seed", cfg.seed},
                   {"policies", results}};
    emit(opts, doc.dump(2) + "\n");
  }
  return 0;
}

}  // namespace patro
