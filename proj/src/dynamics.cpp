#include "metaline/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "metaline/error.hpp"

namespace metaline {

namespace {

void require_symmetric(const Eigen::MatrixXd& h) {
  if (h.rows() == 0 || h.rows() != h.cols()) {
    throw DomainError("hamiltonian must be square and nonempty");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("hamiltonian must be symmetric");
  }
}

}  // namespace

SingleExcitationState SingleExcitationState::qubit_excited(std::size_t modes) {
  SingleExcitationState psi;
  psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes) + 1);
  psi.amplitudes(0) = 1.0;
  return psi;
}

Eigen::MatrixXd build_rwa_hamiltonian(const CouplingSpectrum& couplings, double delta0) {
  const std::size_t n = couplings.frequencies.size();
  if (n == 0) throw DomainError("build_rwa_hamiltonian: needs at least one mode");
  if (couplings.g.size() != n) {
    throw DomainError(fmt::format("build_rwa_hamiltonian: {} couplings for {} modes",
                                  couplings.g.size(), n));
  }
  const auto dim = static_cast<Eigen::Index>(n) + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h(0, 0) = delta0;
  for (std::size_t m = 0; m < n; ++m) {
    const auto i = static_cast<Eigen::Index>(m) + 1;
    h(i, i) = couplings.frequencies[m];
    h(0, i) = couplings.g[m];
    h(i, 0) = couplings.g[m];
  }
  return h;
}

CouplingSpectrum truncate_weak_modes(const CouplingSpectrum& couplings, double min_relative) {
  CouplingSpectrum out;
  for (std::size_t n = 0; n < couplings.size(); ++n) {
    if (couplings.relative_profile[n] < min_relative) continue;
    out.frequencies.push_back(couplings.frequencies[n]);
    out.relative_profile.push_back(couplings.relative_profile[n]);
    out.g.push_back(couplings.g[n]);
  }
  return out;
}

RwaPropagator::RwaPropagator(const Eigen::MatrixXd& h) : h_(h) {
  require_symmetric(h_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h_);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("RwaPropagator: eigendecomposition failed");
  }
  energies_ = eig.eigenvalues();
  basis_ = eig.eigenvectors();
}

SingleExcitationState RwaPropagator::evolve(const SingleExcitationState& psi0, double t) const {
  if (psi0.amplitudes.size() != h_.rows()) {
    throw DomainError(fmt::format("evolve: state has dimension {}, hamiltonian {}",
                                  psi0.amplitudes.size(), h_.rows()));
  }
  if (std::abs(psi0.norm_squared() - 1.0) > 1e-6) {
    throw DomainError(fmt::format("evolve: initial state not normalized (|psi|^2 = {})",
                                  psi0.norm_squared()));
  }
  if (t == 0.0) return psi0;
  Eigen::VectorXcd coeff = basis_.transpose().cast<std::complex<double>>() * psi0.amplitudes;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::polar(1.0, -energies_(k) * t);
  }
  SingleExcitationState out;
  out.amplitudes = basis_.cast<std::complex<double>>() * coeff;
  return out;
}

double RwaPropagator::energy(const SingleExcitationState& psi) const {
  const Eigen::VectorXcd h_psi = h_.cast<std::complex<double>>() * psi.amplitudes;
  return psi.amplitudes.dot(h_psi).real();
}

std::vector<SingleExcitationState> evolve(const Eigen::MatrixXd& h,
                                          const SingleExcitationState& psi0,
                                          std::span<const double> times) {
  const RwaPropagator prop(h);
  std::vector<SingleExcitationState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.evolve(psi0, t));
  return out;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double entropy_qubit(const SingleExcitationState& psi) {
  return binary_entropy(psi.qubit_population());
}

double entropy_minus_mode(const SingleExcitationState& psi, std::size_t n) {
  if (n >= psi.mode_count()) {
    throw DomainError(fmt::format("entropy_minus_mode: mode {} out of range ({} modes)", n,
                                  psi.mode_count()));
  }
  return binary_entropy(psi.qubit_population() + psi.mode_population(n));
}

EntropyReport entropy_report(const SingleExcitationState& psi, double t) {
  EntropyReport report;
  report.time = t;
  report.e_qubit = entropy_qubit(psi);
  report.qubit_population = psi.qubit_population();
  const std::size_t n = psi.mode_count();
  report.e_per_mode.resize(n);
  report.mode_populations.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    report.e_per_mode[m] = entropy_minus_mode(psi, m);
    report.mode_populations[m] = psi.mode_population(m);
  }
  return report;
}

EntropyReport entropy_scan(const Eigen::MatrixXd& h, double t) {
  const RwaPropagator prop(h);
  const auto psi0 = SingleExcitationState::qubit_excited(static_cast<std::size_t>(h.rows()) - 1);
  return entropy_report(prop.evolve(psi0, t), t);
}

}  // namespace metaline
