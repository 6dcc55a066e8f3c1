// commands.hpp
// Entry points for the patro subcommands. Each takes parsed options,
// writes its report to stdout or --out, and returns the process exit
// code: 0 success, 2 numerical failure with diagnostics already
// emitted. Configuration problems throw std::invalid_argument and are
// mapped to exit code 1 by the caller.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace patro {

struct CommandOptions {
  std::string config_path;     // scenario file; directory for table1
  std::string out_path;        // empty writes to stdout
  std::string format = "json"; // json or csv
  std::string mode = "dual";   // adjust: rollout, operational, dual
  std::string rows;            // table1: comma list of 1-based rows
  std::vector<long> n_list;    // sweep: overrides the config sizes
  bool has_seed = false;
  std::uint64_t seed = 0;
};

int cmd_adjust(const CommandOptions& opts);
int cmd_table1(const CommandOptions& opts);
int cmd_sweep(const CommandOptions& opts);
int cmd_validate(const CommandOptions& opts);
int cmd_benchmark(const CommandOptions& opts);
int cmd_simulate(const CommandOptions& opts);

}  // namespace patro
