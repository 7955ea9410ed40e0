#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace pdirac::cli {

/// Command-line overrides applied on top of the configuration file.
struct Options {
  std::optional<std::string> config;
  std::string out = ".";
  std::optional<double> cutoff;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct Artifact {
  std::string name;
  std::string bytes;
};

enum ExitCode : int { kPass = 0, kUsage = 1, kCheckFailed = 2 };

struct CommandResult {
  int exit_code = kPass;
  std::vector<Artifact> artifacts;
  std::string summary;  // one line for stdout
};

const std::vector<std::string>& command_names();

/// Applies --cutoff and --seed to the configuration.
void apply_overrides(RunConfig& cfg, const Options& opts);

/// Runs one subcommand in memory. Throws ConfigError or
/// std::invalid_argument for unusable parameters.
CommandResult run_command(const std::string& name, const RunConfig& cfg, const Options& opts);

/// Writes every artifact into `dir`, creating it if needed.
void write_artifacts(const CommandResult& result, const std::string& dir);

}  // namespace pdirac::cli
