#pragma once

// The five batch commands behind the CLI. Each reads a RunConfig, writes its
// CSV files into the configured output directory and returns their paths.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaline/config.hpp"
#include "metaline/modes.hpp"

namespace metaline {

struct CommandOptions {
  bool profiles = false;  // modes: add one column per node to modes.csv
  std::optional<unsigned> threads;  // overrides run.threads
  std::optional<std::string> out_dir;  // overrides output.dir
};

struct CommandResult {
  std::vector<std::string> files;
  std::string summary;  // one human-readable line
};

CommandResult cmd_modes(const RunConfig& config, const CommandOptions& options = {});
CommandResult cmd_dynamics(const RunConfig& config, const CommandOptions& options = {});
CommandResult cmd_renorm(const RunConfig& config, const CommandOptions& options = {});
CommandResult cmd_phase(const RunConfig& config, const CommandOptions& options = {});
CommandResult cmd_disorder(const RunConfig& config, const CommandOptions& options = {});

/// Dispatches on "modes", "dynamics", "renorm", "phase" or "disorder".
CommandResult run_command(std::string_view name, const RunConfig& config,
                          const CommandOptions& options = {});

/// Qubit with its footprint resolved: an explicit position is kept, otherwise
/// the footprint is centred on the current antinode of the mode nearest the
/// anchor frequency (anchor, else delta0, else the lowest mode).
QubitSpec resolve_qubit(const RunConfig& config, const ModeSet& modes);

/// Coupling spectrum of the configured qubit over the configured window.
CouplingSpectrum configured_couplings(const RunConfig& config, const ModeSet& modes);

}  // namespace metaline
