#include "metaline/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "metaline/error.hpp"

namespace metaline {

namespace {

constexpr double kPi = std::numbers::pi;

void check_zone(double k, double dx, bool allow_zero, const char* who) {
  const double kdx = k * dx;
  // A few ulps of slack so k = pi/dx computed in floating point is accepted.
  const double top = kPi * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  if (!(dx > 0.0) || !(kdx <= top) || kdx < 0.0 || (!allow_zero && kdx == 0.0)) {
    throw DomainError(fmt::format("{}: k*dx = {} outside the first zone", who, kdx));
  }
}

}  // namespace

double omega_rhtl(double k, double c_right, double l_right, double dx) {
  check_zone(k, dx, true, "omega_rhtl");
  return 2.0 / std::sqrt(c_right * l_right) * std::sin(std::min(k * dx, kPi) / 2.0);
}

double omega_lhtl(double k, double c_left, double l_left, double dx) {
  if (k == 0.0) throw DomainError("omega_lhtl: k = 0 has unbounded frequency");
  check_zone(k, dx, false, "omega_lhtl");
  return 1.0 / (2.0 * std::sqrt(c_left * l_left) * std::sin(std::min(k * dx, kPi) / 2.0));
}

BandPoint invert_lhtl(double omega, double omega_ir, double dx) {
  if (!(omega_ir > 0.0) || !(dx > 0.0)) throw DomainError("invert_lhtl: bad omega_ir or dx");
  if (!(omega >= omega_ir)) {
    throw DomainError(
        fmt::format("invert_lhtl: omega = {} below cutoff {} (evanescent)", omega, omega_ir));
  }
  const double phi = std::asin(std::min(1.0, omega_ir / omega));
  return {2.0 * phi / dx, omega, phi};
}

double dom_approx(double omega, const CircuitSpec& spec) {
  const double w_ir = spec.omega_ir();
  if (!(omega > w_ir)) {
    throw DomainError(fmt::format("dom_approx: requires omega > omega_ir ({} <= {})", omega, w_ir));
  }
  const double phi = std::asin(w_ir / omega);
  return 4.0 * spec.n_left * std::sqrt(spec.c_left * spec.l_left) / kPi * std::tan(phi) *
         std::sin(phi);
}

double rhtl_background_density(const CircuitSpec& spec) {
  return spec.rhtl_length * std::sqrt(spec.l_right_per_len * spec.c_right_per_len) / kPi;
}

double lhtl_mode_count_below(double omega, int n_left, double omega_ir) {
  if (omega <= omega_ir) return 0.0;
  return n_left * (1.0 - 2.0 / kPi * std::asin(omega_ir / omega));
}

double spectral_density(double omega, int n_left, double omega_ir) {
  if (omega <= omega_ir) return 0.0;
  return n_left / (kPi * std::sqrt(2.0 * omega_ir)) / std::sqrt(omega - omega_ir);
}

SpectralDensityCurve spectral_density_curve(std::span<const double> omega_grid, int n_left,
                                            double omega_ir) {
  SpectralDensityCurve curve;
  curve.omega_ir = omega_ir;
  curve.n_left = n_left;
  curve.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  curve.j_values.reserve(omega_grid.size());
  for (double w : omega_grid) curve.j_values.push_back(spectral_density(w, n_left, omega_ir));
  return curve;
}

}  // namespace metaline
