#pragma once

// Adiabatic renormalization of the qubit splitting by the line's modes.
//
// Every mode faster than the current splitting follows the qubit
// adiabatically and dresses it with a displacement lambda_n, which lowers the
// splitting to
//
//   D_eff = D_0 exp(-2 sum_{w_n > D_eff} lambda_n^2).
//
// The self-consistent value is found by the monotone iteration
// D^(k+1) = D_0 exp(-2 S(D^(k))) started from D_0. S is a step function of D
// (it changes only when D crosses a mode), so the included set grows
// monotonically and the iteration stops after at most N + 1 steps at the
// largest fixed point. All arithmetic is done on ln D, since the localized
// phase reaches splittings far below the smallest double.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "metaline/modes.hpp"

namespace metaline {

enum class DressingVariant {
  kStandard,  // lambda_n = g_n / w_n
  kLiteral,   // lambda_n = g_n^2 / w_n^2
};

enum class Phase { kDelocalized, kLocalized };

struct RenormOptions {
  double tolerance = 1e-10;  // relative change between iterates
  int max_iterations = 10000;
  double localization_threshold = 1e-3;  // D_eff / D_0 below this is "localized"
};

struct RenormResult {
  double delta0 = 0.0;
  double delta_eff = 0.0;  // rad/s; may underflow to 0 deep in the localized phase
  double log_ratio = 0.0;  // ln(D_eff / D_0), always finite
  std::vector<double> lambdas;  // zero for every w_n <= D_eff
  std::vector<double> trace;    // ln D^(k), starting with ln D_0
  int iterations = 0;
  bool converged = false;
  Phase phase = Phase::kDelocalized;
  double cat_size = 0.0;  // sum lambda_n^2 = -ln(D_eff/D_0) / 2

  double ratio() const;
};

double dressing_amplitude(double g, double omega, DressingVariant variant);

RenormResult renormalize(const CouplingSpectrum& couplings, double delta0,
                         DressingVariant variant = DressingVariant::kStandard,
                         const RenormOptions& options = {});

/// A drop of Delta_eff by more than the detector factor between neighbouring
/// grid points, bisected down to [g_lo, g_hi].
struct JumpEvent {
  double g_lo = 0.0;
  double g_hi = 0.0;
  double log10_drop = 0.0;  // log10(D_eff(g_lo) / D_eff(g_hi))

  double g_star() const { return 0.5 * (g_lo + g_hi); }
};

struct JumpDetector {
  double factor = 10.0;
  double relative_width = 1e-4;
};

/// Scans log_delta(g) sampled on an ascending grid and refines every drop
/// larger than detector.factor by bisection, always keeping the half with the
/// larger drop. Refining a smooth but steep descent shrinks the drop toward
/// 1; a true discontinuity keeps it.
std::vector<JumpEvent> detect_jumps(const std::function<double(double)>& log_delta,
                                    std::span<const double> g_grid,
                                    std::span<const double> log_values,
                                    const JumpDetector& detector = {});

struct SweepOptions {
  DressingVariant variant = DressingVariant::kStandard;
  RenormOptions renorm;
  JumpDetector detector;
};

struct CouplingSweep {
  double delta0 = 0.0;
  std::vector<double> g;
  std::vector<RenormResult> profile;  // couplings g * relative_profile
  std::vector<RenormResult> flat;     // couplings g for every mode
  std::vector<JumpEvent> jumps;
  std::vector<JumpEvent> flat_jumps;
};

/// The template supplies frequencies and relative_profile; its g is ignored.
CouplingSweep sweep_coupling(const CouplingSpectrum& shape, double delta0,
                             std::span<const double> g_grid, const SweepOptions& options = {});

struct BoundaryPoint {
  double delta0 = 0.0;
  bool found = false;
  // Smallest g whose renormalized splitting is in the localized phase,
  // bisected to the detector's relative width.
  double g_star = 0.0;
  double log10_drop = 0.0;  // drop across the refined bracket around g_star
  bool discontinuous = false;
};

struct PhaseDiagram {
  std::vector<double> g_axis;       // rad/s
  std::vector<double> delta0_axis;  // rad/s
  Eigen::MatrixXd delta_eff;        // rows: delta0, cols: g
  Eigen::MatrixXd log_ratio;        // ln(D_eff / D_0)
  std::vector<BoundaryPoint> boundary;  // one per delta0 row

  Phase phase(Eigen::Index row, Eigen::Index col, double threshold = 1e-3) const;
};

PhaseDiagram phase_diagram(const CouplingSpectrum& shape, std::span<const double> g_grid,
                           std::span<const double> delta0_grid, const SweepOptions& options = {},
                           unsigned threads = 1);

/// Convenience path from a circuit: solves the modes inside `window`, builds the
/// coupling profile for `qubit` (its delta0 and g_global are ignored) and sweeps.
PhaseDiagram phase_diagram(const CircuitSpec& spec, const QubitSpec& qubit,
                           std::optional<FrequencyWindow> window,
                           std::span<const double> g_grid, std::span<const double> delta0_grid,
                           const CouplingOptions& coupling = {}, const SweepOptions& options = {},
                           unsigned threads = 1);

/// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace metaline
