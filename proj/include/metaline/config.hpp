#pragma once

// Run configuration: flat "section.key = value" lines, '#' comments, blank
// lines ignored. Frequencies are written in GHz in the file and held in rad/s
// here; the conversion happens once, in parse_config(), and is undone once in
// echo().

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaline/circuit.hpp"
#include "metaline/modes.hpp"
#include "metaline/spinboson.hpp"
#include "metaline/units.hpp"

namespace metaline {

struct QubitConfig {
  double delta0 = 0.0;  // rad/s
  std::optional<double> position;  // m; empty = centre on an antinode
  double anchor = 0.0;  // rad/s, target mode for automatic placement; 0 = delta0
  double extent = 0.5e-3;  // m
  double g_global = 0.0;  // rad/s
};

struct ModesConfig {
  std::optional<double> f_min;  // rad/s
  std::optional<double> f_max;  // rad/s
  double bin_width = units::ghz_to_rad(0.05);
};

struct DynamicsConfig {
  std::vector<double> tg;  // dimensionless t * g_global
  double truncate_below = 0.0;
};

struct RenormConfig {
  DressingVariant variant = DressingVariant::kStandard;
  std::vector<double> g;  // rad/s, ascending
};

struct PhaseConfig {
  std::vector<double> delta0_ratio;  // delta0 / w_ir, ascending
};

struct DisorderConfig {
  double sigma = 0.0;
  int seeds = 1;
  std::uint64_t seed_base = 1;
  std::optional<double> band_min;  // rad/s
  std::optional<double> band_max;  // rad/s
};

struct RunConfig {
  CircuitSpec circuit;
  QubitConfig qubit;
  ModesConfig modes;
  CouplingOptions coupling;
  DynamicsConfig dynamics;
  RenormConfig renorm;
  PhaseConfig phase;
  DisorderConfig disorder;
  std::string output_dir = ".";
  std::string output_stem;
  unsigned threads = 0;

  std::optional<FrequencyWindow> window() const;
  /// Canonical text form; parse_config(echo()) reproduces every value.
  std::string echo() const;
  /// FNV-1a 64 of echo(), as 16 hex digits.
  std::string hash() const;
};

/// Throws ConfigError carrying the line number (0 for missing keys) and key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace metaline
