#pragma once

// Lumped-element description of the hybrid line: a discrete left-handed ladder
// (series C_l, shunt L_l) whose last node is shared with a discretized
// right-handed strip (shunt c_r*dx, series l_r*dx).
//
// Node layout used by build_matrices():
//
//   LHTL nodes 0 .. n_left-1          x = -(n_left-1-i)*cell_pitch   (x <= 0)
//   interface node = n_left-1         x = 0
//   RHTL nodes n_left-1 .. n_left-1+n_right   x = j*rhtl_length/n_right
//
// giving n_left + n_right nodes in total. Every LHTL node carries a shunt
// inductor; consecutive LHTL nodes are joined by a series capacitor, so the
// left end is open unless c_end_left is set.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace metaline {

struct CircuitSpec {
  int n_left = 0;
  double c_left = 0.0;   // F, per series capacitor
  double l_left = 0.0;   // H, per shunt inductor
  double cell_pitch = 0.0;  // m
  double rhtl_length = 0.0;  // m
  double c_right_per_len = 0.0;  // F/m
  double l_right_per_len = 0.0;  // H/m
  int n_right = 300;
  std::optional<double> c_end_left;
  std::optional<double> c_end_right;

  // Optional per-cell values (size n_left) produced by apply_disorder(). When
  // empty the nominal c_left / l_left apply to every cell. Entry i of
  // c_left_cells is the capacitor joining LHTL node i-1 to node i; entry 0 has
  // no left neighbour and is only kept so both vectors index by cell.
  std::vector<double> c_left_cells;
  std::vector<double> l_left_cells;

  double omega_ir() const;
  double rhtl_impedance() const;
  double rhtl_velocity() const;
  double rhtl_cell() const { return rhtl_length / n_right; }
  int node_count() const { return n_left + n_right; }
  int interface_node() const { return n_left - 1; }

  double cell_capacitance(int cell) const;
  double cell_inductance(int cell) const;

  /// Throws ValidationError naming every offending field.
  void validate() const;
};

struct NetworkMatrices {
  Eigen::MatrixXd cap;      // F
  Eigen::MatrixXd inv_ind;  // 1/H
  std::vector<double> node_positions;  // m

  Eigen::Index size() const { return cap.rows(); }
};

/// C_l = 1/(2 w_ir Z0), L_l = Z0/(2 w_ir).
struct LeftHandedDesign {
  double c_left;
  double l_left;
};
LeftHandedDesign design_from_impedance(double z0, double omega_ir);

/// Per-length values for a strip of impedance z0 and phase velocity v.
struct RightHandedDesign {
  double c_per_len;
  double l_per_len;
};
RightHandedDesign rhtl_from_impedance(double z0, double velocity);

NetworkMatrices build_matrices(const CircuitSpec& spec);

/// Stand-alone left-handed ladder of n nodes. c_end_* add a capacitor to
/// ground at the corresponding end node.
NetworkMatrices build_lhtl_matrices(int n_nodes, double c_series, double l_shunt, double pitch,
                                    std::optional<double> c_end_left = {},
                                    std::optional<double> c_end_right = {});

/// Stand-alone right-handed strip discretized into n_cells (n_cells+1 nodes),
/// with half-cell capacitance on the two end nodes.
NetworkMatrices build_rhtl_matrices(double length, double c_per_len, double l_per_len, int n_cells,
                                    std::optional<double> c_end_left = {},
                                    std::optional<double> c_end_right = {});

/// Multiplies every cell's C_l and L_l by an independent (1 + eps),
/// eps ~ N(0, sigma) truncated at +-3 sigma. Deterministic for a given seed
/// and standard library.
CircuitSpec apply_disorder(const CircuitSpec& spec, double relative_sigma, std::uint64_t seed);

}  // namespace metaline
