#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sjfa/config.hpp"

namespace sjfa {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  /// Names of violated model invariants; outputs are still written.
  std::vector<std::string> violations;
  std::string summary;
};

/// fluid.csv (t,x,xi,beta_upper,iota) and manifest.json.
CommandResult cmd_fluid(const RunConfig& cfg, const std::filesystem::path& out_dir);
/// events.csv, empirical.csv (t,x,alpha,beta,xi,iota scaled by 1/N) and manifest.json.
CommandResult cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);
/// distances.csv (N,replication,sup_levy_xi,sup_levy_beta,iota_gap) and manifest.json.
CommandResult cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir);

CommandResult run_command(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace sjfa
