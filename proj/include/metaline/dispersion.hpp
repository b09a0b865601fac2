#pragma once

// Closed-form band structure of the two uncoupled ladders, the approximate
// density of modes near the left-handed band edge, and the resulting
// spin-boson spectral density.

#include <span>
#include <vector>

#include "metaline/circuit.hpp"

namespace metaline {

struct BandPoint {
  double k;      // rad/m
  double omega;  // rad/s
  double phi;    // k*dx/2, in [0, pi/2]
};

/// Right-handed ladder: w = 2/sqrt(C L) * sin(k dx / 2), 0 <= k dx <= pi.
double omega_rhtl(double k, double c_right, double l_right, double dx);

/// Left-handed ladder: w = 1/(2 sqrt(C L) sin(k dx / 2)), 0 < k dx <= pi.
/// k = 0 throws DomainError (the frequency is unbounded there).
double omega_lhtl(double k, double c_left, double l_left, double dx);

/// Inverse of omega_lhtl on the first zone: phi = asin(w_ir / w).
/// Throws DomainError for w < w_ir (evanescent, no propagating mode).
BandPoint invert_lhtl(double omega, double omega_ir, double dx);

/// D(w) = (4 N_l sqrt(C_l L_l) / pi) tan(phi) sin(phi), modes per rad/s.
/// Requires w > w_ir.
double dom_approx(double omega, const CircuitSpec& spec);

/// Constant density contributed by an isolated right-handed strip,
/// length * sqrt(l c) / pi = one-way delay / pi.
double rhtl_background_density(const CircuitSpec& spec);

/// Number of left-handed ladder modes between w_ir and w, N_l (1 - 2/pi asin(w_ir/w)).
double lhtl_mode_count_below(double omega, int n_left, double omega_ir);

/// J(w) ~ N_l / (pi sqrt(2 w_ir)) * Theta(w - w_ir) / sqrt(w - w_ir).
/// Zero for w <= w_ir, including the edge itself.
double spectral_density(double omega, int n_left, double omega_ir);

struct SpectralDensityCurve {
  std::vector<double> omega_grid;
  std::vector<double> j_values;
  double omega_ir = 0.0;
  int n_left = 0;
};

SpectralDensityCurve spectral_density_curve(std::span<const double> omega_grid, int n_left,
                                            double omega_ir);

}  // namespace metaline
