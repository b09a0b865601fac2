#pragma once

#include <string>

#include "metaline/circuit.hpp"
#include "metaline/config.hpp"
#include "metaline/units.hpp"

namespace test_support {

inline std::string config_path(const std::string& name) {
  return std::string(METALINE_CONFIG_DIR) + "/" + name;
}

inline metaline::RunConfig load(const std::string& name) {
  return metaline::load_config(config_path(name));
}

// The reference device: 200 left-handed cells at a 4 GHz cutoff joined to a
// 3 cm, 50 ohm strip that is one wavelength long at the cutoff.
inline metaline::CircuitSpec reference_circuit(int n_left = 200, int n_right = 300) {
  const double w_ir = metaline::units::ghz_to_rad(4.0);
  const auto lhs = metaline::design_from_impedance(50.0, w_ir);
  const auto rhs = metaline::rhtl_from_impedance(50.0, 0.03 * 4e9);
  metaline::CircuitSpec s;
  s.n_left = n_left;
  s.c_left = lhs.c_left;
  s.l_left = lhs.l_left;
  s.cell_pitch = 100e-6;
  s.rhtl_length = 0.03;
  s.c_right_per_len = rhs.c_per_len;
  s.l_right_per_len = rhs.l_per_len;
  s.n_right = n_right;
  return s;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace test_support
