// main.cpp
// The patro command line: solve adjustments, reproduce the reference
// table, sweep experiment sizes, validate model assumptions, benchmark
// against the Bayes rule, and cross-check by simulation.
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "patro/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Post-experiment rollout and operational adjustments"};
  app.require_subcommand(1);

  patro::CommandOptions opts;
  long long seed_arg = 0;

  const auto add_common = [&](CLI::App* sub, const char* config_help) {
    sub->add_option("--config", opts.config_path, config_help)->required();
    sub->add_option("--out", opts.out_path,
                    "write the report here instead of stdout");
    sub->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--seed", seed_arg, "override the config seed")
        ->each([&](const std::string&) { opts.has_seed = true; });
  };

  CLI::App* adjust =
      app.add_subcommand("adjust", "solve the adjustment pair");
  add_common(adjust, "scenario file");
  adjust->add_option("--mode", opts.mode, "which adjustments to solve")
      ->check(CLI::IsMember({"rollout", "operational", "dual"}))
      ->capture_default_str();

  CLI::App* table1 = app.add_subcommand(
      "table1", "improvement rates for the bundled scenarios");
  add_common(table1, "directory holding the scenario files");
  table1->add_option("--rows", opts.rows,
                     "comma-separated 1-based row selection");

  CLI::App* sweep =
      app.add_subcommand("sweep", "adjustments and regret across sizes");
  add_common(sweep, "scenario file");
  sweep->add_option("--n-list", opts.n_list,
                    "experiment sizes overriding the config");

  add_common(app.add_subcommand("validate", "check model assumptions"),
             "scenario file");
  add_common(app.add_subcommand("benchmark", "compare against the Bayes rule"),
             "scenario file");
  add_common(app.add_subcommand("simulate",
                                "empirical regret from synthetic experiments"),
             "scenario file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opts.seed = static_cast<std::uint64_t>(seed_arg);

  try {
    if (app.got_subcommand("adjust")) return patro::cmd_adjust(opts);
    if (app.got_subcommand("table1")) return patro::cmd_table1(opts);
    if (app.got_subcommand("sweep")) return patro::cmd_sweep(opts);
    if (app.got_subcommand("validate")) return patro::cmd_validate(opts);
    if (app.got_subcommand("benchmark")) return patro::cmd_benchmark(opts);
    return patro::cmd_simulate(opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
