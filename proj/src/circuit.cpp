#include "metaline/circuit.hpp"

#include <cmath>
#include <random>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "metaline/error.hpp"

namespace metaline {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Adds a two-terminal element of admittance-like weight w between nodes a, b.
void stamp_branch(Eigen::MatrixXd& m, Eigen::Index a, Eigen::Index b, double w) {
  m(a, a) += w;
  m(b, b) += w;
  m(a, b) -= w;
  m(b, a) -= w;
}

// Writes the left-handed ladder into the leading n x n block.
void stamp_lhtl(NetworkMatrices& net, const CircuitSpec& spec) {
  for (int i = 0; i < spec.n_left; ++i) {
    net.inv_ind(i, i) += 1.0 / spec.cell_inductance(i);
    if (i > 0) stamp_branch(net.cap, i - 1, i, spec.cell_capacitance(i));
  }
}

}  // namespace

double CircuitSpec::omega_ir() const { return 1.0 / (2.0 * std::sqrt(c_left * l_left)); }

double CircuitSpec::rhtl_impedance() const { return std::sqrt(l_right_per_len / c_right_per_len); }

double CircuitSpec::rhtl_velocity() const {
  return 1.0 / std::sqrt(l_right_per_len * c_right_per_len);
}

double CircuitSpec::cell_capacitance(int cell) const {
  return c_left_cells.empty() ? c_left : c_left_cells[static_cast<std::size_t>(cell)];
}

double CircuitSpec::cell_inductance(int cell) const {
  return l_left_cells.empty() ? l_left : l_left_cells[static_cast<std::size_t>(cell)];
}

void CircuitSpec::validate() const {
  std::vector<std::string> bad;
  if (n_left < 1) bad.emplace_back("n_left");
  if (!positive_finite(c_left)) bad.emplace_back("c_left");
  if (!positive_finite(l_left)) bad.emplace_back("l_left");
  if (!positive_finite(cell_pitch)) bad.emplace_back("cell_pitch");
  if (!positive_finite(rhtl_length)) bad.emplace_back("rhtl_length");
  if (!positive_finite(c_right_per_len)) bad.emplace_back("c_right_per_len");
  if (!positive_finite(l_right_per_len)) bad.emplace_back("l_right_per_len");
  if (n_right < 2) bad.emplace_back("n_right");
  if (c_end_left && !positive_finite(*c_end_left)) bad.emplace_back("c_end_left");
  if (c_end_right && !positive_finite(*c_end_right)) bad.emplace_back("c_end_right");

  auto check_cells = [&](const std::vector<double>& cells, const char* name) {
    if (cells.empty()) return;
    bool ok = n_left >= 1 && cells.size() == static_cast<std::size_t>(n_left);
    for (double v : cells) ok = ok && positive_finite(v);
    if (!ok) bad.emplace_back(name);
  };
  check_cells(c_left_cells, "c_left_cells");
  check_cells(l_left_cells, "l_left_cells");

  if (bad.empty() && !positive_finite(omega_ir())) bad.emplace_back("omega_ir");
  if (bad.empty() && !positive_finite(rhtl_impedance())) bad.emplace_back("rhtl_impedance");

  if (!bad.empty()) {
    throw ValidationError(fmt::format("invalid circuit: {}", fmt::join(bad, ", ")), bad);
  }
}

LeftHandedDesign design_from_impedance(double z0, double omega_ir) {
  if (!positive_finite(z0) || !positive_finite(omega_ir)) {
    throw DomainError(fmt::format(
        "design_from_impedance: z0 and omega_ir must be positive (got {}, {})", z0, omega_ir));
  }
  return {1.0 / (2.0 * omega_ir * z0), z0 / (2.0 * omega_ir)};
}

RightHandedDesign rhtl_from_impedance(double z0, double velocity) {
  if (!positive_finite(z0) || !positive_finite(velocity)) {
    throw DomainError("rhtl_from_impedance: impedance and velocity must be positive");
  }
  return {1.0 / (z0 * velocity), z0 / velocity};
}

NetworkMatrices build_matrices(const CircuitSpec& spec) {
  spec.validate();
  const int n = spec.node_count();
  const int iface = spec.interface_node();
  const double dx = spec.rhtl_cell();

  NetworkMatrices net;
  net.cap = Eigen::MatrixXd::Zero(n, n);
  net.inv_ind = Eigen::MatrixXd::Zero(n, n);
  net.node_positions.resize(static_cast<std::size_t>(n));

  stamp_lhtl(net, spec);
  for (int i = 0; i < spec.n_left; ++i) {
    net.node_positions[static_cast<std::size_t>(i)] = -(spec.n_left - 1 - i) * spec.cell_pitch;
  }

  const double c_cell = spec.c_right_per_len * dx;
  const double inv_l_cell = 1.0 / (spec.l_right_per_len * dx);
  for (int j = 0; j < spec.n_right; ++j) {
    const int a = iface + j;
    const int b = a + 1;
    net.cap(a, a) += 0.5 * c_cell;
    net.cap(b, b) += 0.5 * c_cell;
    stamp_branch(net.inv_ind, a, b, inv_l_cell);
  }
  for (int j = 0; j <= spec.n_right; ++j) {
    net.node_positions[static_cast<std::size_t>(iface + j)] = j * dx;
  }

  if (spec.c_end_left) net.cap(0, 0) += *spec.c_end_left;
  if (spec.c_end_right) net.cap(n - 1, n - 1) += *spec.c_end_right;
  return net;
}

NetworkMatrices build_lhtl_matrices(int n_nodes, double c_series, double l_shunt, double pitch,
                                    std::optional<double> c_end_left,
                                    std::optional<double> c_end_right) {
  if (n_nodes < 1 || !positive_finite(c_series) || !positive_finite(l_shunt) ||
      !positive_finite(pitch)) {
    throw DomainError("build_lhtl_matrices: node count and element values must be positive");
  }
  NetworkMatrices net;
  net.cap = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  net.inv_ind = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  net.node_positions.resize(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    net.inv_ind(i, i) = 1.0 / l_shunt;
    if (i > 0) stamp_branch(net.cap, i - 1, i, c_series);
    net.node_positions[static_cast<std::size_t>(i)] = i * pitch;
  }
  if (c_end_left) net.cap(0, 0) += *c_end_left;
  if (c_end_right) net.cap(n_nodes - 1, n_nodes - 1) += *c_end_right;
  return net;
}

NetworkMatrices build_rhtl_matrices(double length, double c_per_len, double l_per_len, int n_cells,
                                    std::optional<double> c_end_left,
                                    std::optional<double> c_end_right) {
  if (n_cells < 1 || !positive_finite(length) || !positive_finite(c_per_len) ||
      !positive_finite(l_per_len)) {
    throw DomainError("build_rhtl_matrices: cell count and line constants must be positive");
  }
  const int n = n_cells + 1;
  const double dx = length / n_cells;
  NetworkMatrices net;
  net.cap = Eigen::MatrixXd::Zero(n, n);
  net.inv_ind = Eigen::MatrixXd::Zero(n, n);
  net.node_positions.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n_cells; ++j) {
    net.cap(j, j) += 0.5 * c_per_len * dx;
    net.cap(j + 1, j + 1) += 0.5 * c_per_len * dx;
    stamp_branch(net.inv_ind, j, j + 1, 1.0 / (l_per_len * dx));
  }
  for (int j = 0; j < n; ++j) net.node_positions[static_cast<std::size_t>(j)] = j * dx;
  if (c_end_left) net.cap(0, 0) += *c_end_left;
  if (c_end_right) net.cap(n - 1, n - 1) += *c_end_right;
  return net;
}

CircuitSpec apply_disorder(const CircuitSpec& spec, double relative_sigma, std::uint64_t seed) {
  if (!(relative_sigma >= 0.0 && relative_sigma < 0.5)) {
    throw DomainError(
        fmt::format("apply_disorder: relative_sigma must lie in [0, 0.5), got {}", relative_sigma));
  }
  spec.validate();
  CircuitSpec out = spec;
  if (relative_sigma == 0.0) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, relative_sigma);
  auto draw = [&] {
    for (;;) {
      const double eps = normal(rng);
      if (std::abs(eps) <= 3.0 * relative_sigma) return eps;
    }
  };

  const auto n = static_cast<std::size_t>(spec.n_left);
  out.c_left_cells.resize(n);
  out.l_left_cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.c_left_cells[i] = spec.cell_capacitance(static_cast<int>(i)) * (1.0 + draw());
    out.l_left_cells[i] = spec.cell_inductance(static_cast<int>(i)) * (1.0 + draw());
  }
  return out;
}

}  // namespace metaline
