#pragma once

// Normal modes of the quantized network: the symmetric-definite pencil
// inv_ind v = w^2 cap v, solved by Cholesky reduction and a dense symmetric
// eigensolver. Profiles are node fluxes normalized so that v^T cap v = 1.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "metaline/circuit.hpp"

namespace metaline {

struct FrequencyWindow {
  double lo;  // rad/s, inclusive
  double hi;  // rad/s, inclusive
  bool contains(double w) const { return w >= lo && w <= hi; }
};

struct SolveOptions {
  std::optional<FrequencyWindow> window;
  // Modes with w < zero_mode_ratio * reference are free-charge / gauge modes
  // and are dropped. reference defaults to the largest eigenfrequency.
  double zero_mode_ratio = 1e-6;
  std::optional<double> reference_omega;
  // Node whose profile entry is made non-negative.
  int sign_node = 0;
};

struct ModeSet {
  std::vector<double> frequencies;  // rad/s, ascending
  Eigen::MatrixXd profiles;         // nodes x modes
  std::vector<double> node_positions;
  int interface_node = 0;  // first right-handed node; LHTL nodes are [0, interface_node]

  std::size_t size() const { return frequencies.size(); }
  bool empty() const { return frequencies.empty(); }
};

ModeSet solve_modes(const NetworkMatrices& mat, const SolveOptions& options = {});

/// Builds and solves the full circuit; zero modes are judged against w_ir and
/// the sign is fixed at the interface node.
ModeSet solve_modes(const CircuitSpec& spec, std::optional<FrequencyWindow> window = {});

/// Node voltages w_n v_n, sign chosen so the interface entry is >= 0.
Eigen::VectorXd voltage_profile(const ModeSet& modes, std::size_t n);

/// Sign flips along a vector, ignoring entries below 1e-9 of its max magnitude.
int sign_changes(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Nodes of the slowly varying envelope on the left-handed nodes. Near the
/// band edge the raw profile alternates from cell to cell, so this counts sign
/// changes of (-1)^i v_i; it grows by one between consecutive band-edge modes.
int lhtl_envelope_nodes(const ModeSet& modes, std::size_t n);

/// Branch currents (phi_j - phi_{j+1}) / (l_r dx) of mode n on the right-handed
/// strip, located at branch midpoints (j + 1/2) dx.
std::vector<double> rhtl_branch_currents(const ModeSet& modes, const CircuitSpec& spec,
                                         std::size_t n);

/// Magnitude of the mean branch current of mode n over [x0, x0 + extent],
/// interpolating linearly between branch midpoints. extent = 0 gives the
/// pointwise value.
double current_average(const ModeSet& modes, const CircuitSpec& spec, std::size_t n, double x0,
                       double extent);

/// Position (m, RHTL coordinate) of the branch with the largest |current| in mode n.
double current_antinode(const ModeSet& modes, const CircuitSpec& spec, std::size_t n);

/// Left edge of a footprint of the given extent centred on the current
/// antinode of the mode closest to target_omega, clamped onto the strip.
double footprint_at_antinode(const ModeSet& modes, const CircuitSpec& spec, double target_omega,
                             double extent);

struct QubitSpec {
  double delta0 = 0.0;    // rad/s
  double position = 0.0;  // m, left edge of the footprint on the RHTL
  double extent = 0.5e-3; // m
  double g_global = 0.0;  // rad/s

  void validate(const CircuitSpec& spec) const;
};

enum class CouplingNormalization {
  kSpatial,          // s(w) = 1
  kDensityWeighted,  // s(w) = D(w), left-handed term plus the strip background
};

enum class CurrentShape {
  kPeakNormalized,  // each mode's strip current scaled to unit peak before averaging
  kRaw,             // capacitance-normalized amplitude as solved
};

struct CouplingOptions {
  CouplingNormalization normalization = CouplingNormalization::kSpatial;
  CurrentShape shape = CurrentShape::kPeakNormalized;
};

struct CouplingSpectrum {
  std::vector<double> frequencies;       // rad/s
  std::vector<double> relative_profile;  // in [0, 1], max exactly 1
  std::vector<double> g;                 // rad/s, g_global * relative_profile

  std::size_t size() const { return frequencies.size(); }
};

CouplingSpectrum coupling_spectrum(const ModeSet& modes, const CircuitSpec& spec,
                                   const QubitSpec& qubit, const CouplingOptions& options = {});

/// Same profile, new global scale.
CouplingSpectrum rescale(const CouplingSpectrum& spectrum, double g_global);

/// Profile forced to 1 for every mode (the "spatial dependence neglected" companion).
CouplingSpectrum flat_profile(const CouplingSpectrum& spectrum, double g_global);

struct DensityOfModes {
  double bin_start = 0.0;  // rad/s
  double bin_width = 0.0;  // rad/s
  std::vector<double> density;  // modes per rad/s, one per bin
  // Nearest-neighbour estimate 1/(w_{n+1} - w_n), placed at the midpoint.
  std::vector<double> spacing_omega;
  std::vector<double> spacing_density;
};

DensityOfModes dom_numeric(std::span<const double> frequencies, double bin_width);

}  // namespace metaline
