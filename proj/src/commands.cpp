#include "metaline/commands.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

#include <fmt/format.h>

#include "metaline/csv.hpp"
#include "metaline/dispersion.hpp"
#include "metaline/dynamics.hpp"
#include "metaline/error.hpp"
#include "metaline/parallel.hpp"
#include "metaline/spinboson.hpp"

namespace metaline {

namespace {

using units::rad_to_ghz;

// Densities are written per GHz of ordinary frequency.
constexpr double kPerGhz = units::kTwoPi * units::kGiga;

struct Output {
  std::string dir;
  std::string stem;
  std::string hash;

  std::string path(std::string_view name) const {
    const std::string file = stem.empty() ? std::string(name) : fmt::format("{}_{}", stem, name);
    return (std::filesystem::path(dir) / file).string();
  }
};

Output prepare_output(const RunConfig& config, const CommandOptions& options) {
  Output out{options.out_dir.value_or(config.output_dir), config.output_stem, config.hash()};
  std::error_code ec;
  std::filesystem::create_directories(out.dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", out.dir, ec.message()));
  return out;
}

unsigned thread_count(const RunConfig& config, const CommandOptions& options) {
  return resolve_threads(options.threads.value_or(config.threads));
}

double require_delta0(const RunConfig& config) {
  if (!(config.qubit.delta0 > 0.0)) {
    throw ConfigError("qubit.delta0_ghz: required for this command", 0, "qubit.delta0_ghz");
  }
  return config.qubit.delta0;
}

std::string phase_name(Phase p) { return p == Phase::kLocalized ? "localized" : "delocalized"; }

}  // namespace

QubitSpec resolve_qubit(const RunConfig& config, const ModeSet& modes) {
  QubitSpec q;
  q.delta0 = config.qubit.delta0;
  q.extent = config.qubit.extent;
  q.g_global = config.qubit.g_global;
  if (config.qubit.position) {
    q.position = *config.qubit.position;
  } else {
    if (modes.empty()) throw DomainError("resolve_qubit: no modes to place the qubit on");
    double anchor = config.qubit.anchor;
    if (!(anchor > 0.0)) anchor = config.qubit.delta0;
    if (!(anchor > 0.0)) anchor = modes.frequencies.front();
    q.position = footprint_at_antinode(modes, config.circuit, anchor, q.extent);
  }
  return q;
}

CouplingSpectrum configured_couplings(const RunConfig& config, const ModeSet& modes) {
  QubitSpec q = resolve_qubit(config, modes);
  // The footprint check needs some splitting; the spectrum does not depend on it.
  if (!(q.delta0 > 0.0)) q.delta0 = modes.frequencies.front();
  return coupling_spectrum(modes, config.circuit, q, config.coupling);
}

CommandResult cmd_modes(const RunConfig& config, const CommandOptions& options) {
  const Output out = prepare_output(config, options);
  const CircuitSpec& spec = config.circuit;
  const ModeSet modes = solve_modes(spec, config.window());
  const double w_ir = spec.omega_ir();
  CommandResult result;

  {
    std::vector<std::string> columns{"n", "freq_ghz", "freq_over_ir", "envelope_nodes"};
    const auto nodes = options.profiles ? modes.profiles.rows() : 0;
    for (Eigen::Index i = 0; i < nodes; ++i) columns.push_back(fmt::format("v{}", i));
    CsvWriter csv(out.path("modes.csv"), "modes", out.hash, columns);
    for (std::size_t n = 0; n < modes.size(); ++n) {
      std::vector<CsvCell> row{static_cast<long long>(n + 1), rad_to_ghz(modes.frequencies[n]),
                               modes.frequencies[n] / w_ir,
                               static_cast<long long>(lhtl_envelope_nodes(modes, n))};
      if (options.profiles) {
        const Eigen::VectorXd v = voltage_profile(modes, n);
        for (Eigen::Index i = 0; i < v.size(); ++i) row.emplace_back(v(i));
      }
      csv.row(row);
    }
    result.files.push_back(csv.path());
  }

  {
    CsvWriter csv(out.path("dom.csv"), "modes", out.hash,
                  {"freq_ghz", "d_numeric", "d_approx", "d_approx_with_rhtl"});
    if (modes.size() >= 2) {
      const DensityOfModes dom = dom_numeric(modes.frequencies, config.modes.bin_width);
      const double background = rhtl_background_density(spec);
      for (std::size_t i = 0; i < dom.spacing_omega.size(); ++i) {
        const double w = dom.spacing_omega[i];
        const double lhtl = w > w_ir ? dom_approx(w, spec) : 0.0;
        csv.row({rad_to_ghz(w), dom.spacing_density[i] * kPerGhz, lhtl * kPerGhz,
                 (lhtl + background) * kPerGhz});
      }
    }
    result.files.push_back(csv.path());
  }

  {
    CsvWriter csv(out.path("dom_binned.csv"), "modes", out.hash,
                  {"bin_start_ghz", "bin_end_ghz", "d_numeric"});
    if (modes.size() >= 2) {
      const DensityOfModes dom = dom_numeric(modes.frequencies, config.modes.bin_width);
      for (std::size_t b = 0; b < dom.density.size(); ++b) {
        const double lo = dom.bin_start + static_cast<double>(b) * dom.bin_width;
        csv.row({rad_to_ghz(lo), rad_to_ghz(lo + dom.bin_width), dom.density[b] * kPerGhz});
      }
    }
    result.files.push_back(csv.path());
  }

  {
    CsvWriter csv(out.path("couplings.csv"), "modes", out.hash,
                  {"n", "freq_ghz", "relative_profile", "g_ghz"});
    if (!modes.empty()) {
      const CouplingSpectrum c = configured_couplings(config, modes);
      for (std::size_t n = 0; n < c.size(); ++n) {
        csv.row({static_cast<long long>(n + 1), rad_to_ghz(c.frequencies[n]),
                 c.relative_profile[n], rad_to_ghz(c.g[n])});
      }
    }
    result.files.push_back(csv.path());
  }

  result.summary = modes.empty()
                       ? std::string("no modes in the frequency window")
                       : fmt::format("{} modes, lowest {:.6f} GHz ({:.6f} w_ir)", modes.size(),
                                     rad_to_ghz(modes.frequencies.front()),
                                     modes.frequencies.front() / w_ir);
  return result;
}

CommandResult cmd_dynamics(const RunConfig& config, const CommandOptions& options) {
  const double delta0 = require_delta0(config);
  const double g = config.qubit.g_global;
  if (!(g > 0.0)) throw ConfigError("qubit.g_ghz: must be positive for dynamics", 0, "qubit.g_ghz");
  const Output out = prepare_output(config, options);
  const ModeSet modes = solve_modes(config.circuit, config.window());
  CommandResult result;
  CsvWriter csv(out.path("entropy.csv"), "dynamics", out.hash,
                {"tg", "n", "freq_ghz", "population", "e_n", "e_q"});
  result.files.push_back(csv.path());
  if (modes.empty()) {
    result.summary = "no modes in the frequency window";
    return result;
  }

  const CouplingSpectrum all = configured_couplings(config, modes);
  std::vector<std::size_t> kept;
  for (std::size_t n = 0; n < all.size(); ++n) {
    if (all.relative_profile[n] >= config.dynamics.truncate_below) kept.push_back(n);
  }
  const CouplingSpectrum couplings = truncate_weak_modes(all, config.dynamics.truncate_below);
  if (couplings.size() == 0) {
    throw ConfigError("dynamics.truncate_below: removes every mode", 0, "dynamics.truncate_below");
  }
  const RwaPropagator prop(build_rwa_hamiltonian(couplings, delta0));
  const auto psi0 = SingleExcitationState::qubit_excited(couplings.size());

  double worst = std::numeric_limits<double>::infinity();
  for (double tg : config.dynamics.tg) {
    const EntropyReport rep = entropy_report(prop.evolve(psi0, tg / g), tg);
    for (std::size_t m = 0; m < kept.size(); ++m) {
      csv.row({tg, static_cast<long long>(kept[m] + 1), rad_to_ghz(couplings.frequencies[m]),
               rep.mode_populations[m], rep.e_per_mode[m], rep.e_qubit});
      if (tg > 0.0 && rep.mode_populations[m] > 1e-6) {
        worst = std::min(worst, rep.e_per_mode[m] - rep.e_qubit);
      }
    }
  }
  result.summary = fmt::format("{} modes, {} time points, min(E_n - E_q) over populated modes {}",
                               couplings.size(), config.dynamics.tg.size(),
                               std::isfinite(worst) ? fmt::format("{:.3e}", worst) : "n/a");
  return result;
}

CommandResult cmd_renorm(const RunConfig& config, const CommandOptions& options) {
  const double delta0 = require_delta0(config);
  if (config.renorm.g.empty()) {
    throw ConfigError("renorm.g_min_ghz: a coupling grid is required", 0, "renorm.g_min_ghz");
  }
  const Output out = prepare_output(config, options);
  const ModeSet modes = solve_modes(config.circuit, config.window());
  if (modes.empty()) throw DomainError("renorm: no modes in the frequency window");
  const double w_ir = config.circuit.omega_ir();

  SweepOptions sweep_options;
  sweep_options.variant = config.renorm.variant;
  const CouplingSweep sweep =
      sweep_coupling(configured_couplings(config, modes), delta0, config.renorm.g, sweep_options);

  CommandResult result;
  {
    CsvWriter csv(out.path("renorm.csv"), "renorm", out.hash,
                  {"g_ghz", "g_over_ir", "delta_eff_ghz", "log10_ratio", "phase", "iterations",
                   "converged", "flat_delta_eff_ghz", "flat_log10_ratio", "flat_phase"});
    for (std::size_t i = 0; i < sweep.g.size(); ++i) {
      const RenormResult& p = sweep.profile[i];
      const RenormResult& f = sweep.flat[i];
      csv.row({rad_to_ghz(sweep.g[i]), sweep.g[i] / w_ir, rad_to_ghz(p.delta_eff),
               p.log_ratio / std::numbers::ln10, phase_name(p.phase),
               static_cast<long long>(p.iterations), static_cast<long long>(p.converged),
               rad_to_ghz(f.delta_eff), f.log_ratio / std::numbers::ln10, phase_name(f.phase)});
    }
    result.files.push_back(csv.path());
  }
  {
    CsvWriter csv(out.path("renorm_jumps.csv"), "renorm", out.hash,
                  {"curve", "g_lo_ghz", "g_hi_ghz", "g_star_over_ir", "log10_drop"});
    auto emit = [&](const std::vector<JumpEvent>& jumps, const std::string& curve) {
      for (const JumpEvent& j : jumps) {
        csv.row({curve, rad_to_ghz(j.g_lo), rad_to_ghz(j.g_hi), j.g_star() / w_ir, j.log10_drop});
      }
    };
    emit(sweep.jumps, "profile");
    emit(sweep.flat_jumps, "flat");
    result.files.push_back(csv.path());
  }
  result.summary = fmt::format("{} coupling values, {} jump(s) with profile, {} flat",
                               sweep.g.size(), sweep.jumps.size(), sweep.flat_jumps.size());
  return result;
}

CommandResult cmd_phase(const RunConfig& config, const CommandOptions& options) {
  if (config.renorm.g.empty()) {
    throw ConfigError("renorm.g_min_ghz: a coupling grid is required", 0, "renorm.g_min_ghz");
  }
  if (config.phase.delta0_ratio.empty()) {
    throw ConfigError("phase.delta0_min_ratio: a splitting grid is required", 0,
                      "phase.delta0_min_ratio");
  }
  const Output out = prepare_output(config, options);
  const double w_ir = config.circuit.omega_ir();
  const ModeSet modes = solve_modes(config.circuit, config.window());
  if (modes.empty()) throw DomainError("phase: no modes in the frequency window");

  std::vector<double> delta0;
  for (double r : config.phase.delta0_ratio) delta0.push_back(r * w_ir);
  SweepOptions sweep_options;
  sweep_options.variant = config.renorm.variant;
  const PhaseDiagram pd = phase_diagram(configured_couplings(config, modes), config.renorm.g,
                                        delta0, sweep_options, thread_count(config, options));

  CommandResult result;
  int localized = 0;
  {
    CsvWriter csv(out.path("phase.csv"), "phase", out.hash,
                  {"delta0_ghz", "delta0_over_ir", "g_ghz", "g_over_ir", "delta_eff_ghz",
                   "log10_ratio", "phase"});
    for (Eigen::Index r = 0; r < pd.log_ratio.rows(); ++r) {
      for (Eigen::Index c = 0; c < pd.log_ratio.cols(); ++c) {
        const double d0 = pd.delta0_axis[static_cast<std::size_t>(r)];
        const double g = pd.g_axis[static_cast<std::size_t>(c)];
        const Phase ph = pd.phase(r, c, sweep_options.renorm.localization_threshold);
        localized += ph == Phase::kLocalized;
        csv.row({rad_to_ghz(d0), d0 / w_ir, rad_to_ghz(g), g / w_ir, rad_to_ghz(pd.delta_eff(r, c)),
                 pd.log_ratio(r, c) / std::numbers::ln10, phase_name(ph)});
      }
    }
    result.files.push_back(csv.path());
  }
  int found = 0;
  {
    CsvWriter csv(out.path("boundary.csv"), "phase", out.hash,
                  {"delta0_ghz", "delta0_over_ir", "found", "g_star_ghz", "g_star_over_ir",
                   "log10_drop", "discontinuous"});
    for (const BoundaryPoint& b : pd.boundary) {
      found += b.found;
      csv.row({rad_to_ghz(b.delta0), b.delta0 / w_ir, static_cast<long long>(b.found),
               b.found ? rad_to_ghz(b.g_star) : std::nan(""), b.found ? b.g_star / w_ir : std::nan(""),
               b.log10_drop, static_cast<long long>(b.discontinuous)});
    }
    result.files.push_back(csv.path());
  }
  result.summary = fmt::format("{}x{} grid, {} localized cells, boundary found on {} of {} rows",
                               pd.log_ratio.rows(), pd.log_ratio.cols(), localized, found,
                               pd.boundary.size());
  return result;
}

CommandResult cmd_disorder(const RunConfig& config, const CommandOptions& options) {
  const Output out = prepare_output(config, options);
  const DisorderConfig& d = config.disorder;
  const auto window = config.window();
  const double band_lo = d.band_min.value_or(window ? window->lo : 0.0);
  const double band_hi = d.band_max.value_or(window ? window->hi
                                                    : std::numeric_limits<double>::infinity());

  const auto seeds = static_cast<std::size_t>(d.seeds);
  std::vector<double> edge(seeds);
  std::vector<double> count(seeds);
  parallel_for(seeds, thread_count(config, options), [&](std::size_t i) {
    const CircuitSpec spec = apply_disorder(config.circuit, d.sigma, d.seed_base + i);
    const ModeSet modes = solve_modes(spec, window);
    edge[i] = modes.empty() ? std::nan("") : modes.frequencies.front();
    count[i] = 0.0;
    for (double w : modes.frequencies) count[i] += (w >= band_lo && w <= band_hi);
  });

  auto mean_std = [&](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / n)};
  };

  CsvWriter csv(out.path("disorder.csv"), "disorder", out.hash,
                {"seed", "edge_ghz", "edge_over_ir", "band_count"});
  const double w_ir = config.circuit.omega_ir();
  for (std::size_t i = 0; i < seeds; ++i) {
    csv.row({std::to_string(d.seed_base + i), rad_to_ghz(edge[i]), edge[i] / w_ir, count[i]});
  }
  const auto [edge_mean, edge_std] = mean_std(edge);
  const auto [count_mean, count_std] = mean_std(count);
  csv.row({std::string("mean"), rad_to_ghz(edge_mean), edge_mean / w_ir, count_mean});
  csv.row({std::string("stddev"), rad_to_ghz(edge_std), edge_std / w_ir, count_std});

  CommandResult result;
  result.files.push_back(csv.path());
  result.summary = fmt::format("{} seeds at sigma {}: band count {:.3f} +- {:.3f}", seeds, d.sigma,
                               count_mean, count_std);
  return result;
}

CommandResult run_command(std::string_view name, const RunConfig& config,
                          const CommandOptions& options) {
  if (name == "modes") return cmd_modes(config, options);
  if (name == "dynamics") return cmd_dynamics(config, options);
  if (name == "renorm") return cmd_renorm(config, options);
  if (name == "phase") return cmd_phase(config, options);
  if (name == "disorder") return cmd_disorder(config, options);
  throw DomainError(fmt::format("unknown command '{}'", name));
}

}  // namespace metaline
