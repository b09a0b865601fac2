#pragma once

// Rotating-wave dynamics of the qubit + multimode line restricted to the
// one-excitation sector {|1;0>, |0;n>}, and the entanglement entropies of the
// evolved state. Counter-rotating terms are absent by construction.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "metaline/modes.hpp"

namespace metaline {

struct SingleExcitationState {
  // Index 0 is |1;0> (qubit excited), index n >= 1 is |0;n>.
  Eigen::VectorXcd amplitudes;

  std::complex<double> c0() const { return amplitudes(0); }
  std::size_t mode_count() const { return static_cast<std::size_t>(amplitudes.size()) - 1; }
  double qubit_population() const { return std::norm(amplitudes(0)); }
  /// |c_n|^2 for 0-based mode index n.
  double mode_population(std::size_t n) const {
    return std::norm(amplitudes(static_cast<Eigen::Index>(n) + 1));
  }
  double norm_squared() const { return amplitudes.squaredNorm(); }

  static SingleExcitationState qubit_excited(std::size_t modes);
};

/// (N+1)x(N+1) arrowhead: diag(delta0, w_1..w_N), H[0,n] = H[n,0] = g_n.
Eigen::MatrixXd build_rwa_hamiltonian(const CouplingSpectrum& couplings, double delta0);

/// Drops modes whose relative coupling is below min_relative.
CouplingSpectrum truncate_weak_modes(const CouplingSpectrum& couplings, double min_relative);

/// exp(-i H t) through a single eigendecomposition of H.
class RwaPropagator {
 public:
  explicit RwaPropagator(const Eigen::MatrixXd& h);

  SingleExcitationState evolve(const SingleExcitationState& psi0, double t) const;
  double energy(const SingleExcitationState& psi) const;
  Eigen::Index dimension() const { return h_.rows(); }

 private:
  Eigen::MatrixXd h_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd basis_;
};

std::vector<SingleExcitationState> evolve(const Eigen::MatrixXd& h,
                                          const SingleExcitationState& psi0,
                                          std::span<const double> times);

/// -p ln p - (1-p) ln(1-p), in nats.
double binary_entropy(double p);

/// Entropy of the qubit | all-modes bipartition: H2(|c0|^2).
double entropy_qubit(const SingleExcitationState& psi);

/// Entropy left after tracing out the qubit and mode n (0-based):
/// H2(|c0|^2 + |c_n|^2).
double entropy_minus_mode(const SingleExcitationState& psi, std::size_t n);

struct EntropyReport {
  double time = 0.0;  // s
  double e_qubit = 0.0;
  std::vector<double> e_per_mode;
  double qubit_population = 0.0;
  std::vector<double> mode_populations;
};

EntropyReport entropy_report(const SingleExcitationState& psi, double t);

/// Evolves |1;0> to time t and reports E_q and every E_n.
EntropyReport entropy_scan(const Eigen::MatrixXd& h, double t);

}  // namespace metaline
