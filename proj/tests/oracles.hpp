#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "metaline/dynamics.hpp"
#include "metaline/modes.hpp"
#include "metaline/spinboson.hpp"

namespace oracles {

using namespace metaline;
using cd = std::complex<double>;

inline CouplingSpectrum spectrum(std::vector<double> w, std::vector<double> g) {
  CouplingSpectrum c;
  c.frequencies = std::move(w);
  c.g = std::move(g);
  c.relative_profile.assign(c.g.size(), 1.0);
  return c;
}

inline double dressing_sum(const CouplingSpectrum& c, double log_delta, DressingVariant v) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (std::log(c.frequencies[n]) > log_delta) {
      const double l = dressing_amplitude(c.g[n], c.frequencies[n], v);
      s += l * l;
    }
  }
  return s;
}

// Largest self-consistent splitting found by scanning a dense logarithmic grid
// downward from delta0, with extra points just above and below every mode.
// Returns ln(D_eff / D_0).
inline double grid_search_log_ratio(const CouplingSpectrum& c, double delta0, DressingVariant v) {
  const double log_d0 = std::log(delta0);
  const double floor = log_d0 - 2.0 * dressing_sum(c, -1e300, v) - 1.0;
  std::vector<double> grid;
  const int points = 20000;
  for (int i = 0; i <= points; ++i) grid.push_back(log_d0 + (floor - log_d0) * i / points);
  for (double w : c.frequencies) {
    for (double eps : {1e-9, -1e-9}) {
      const double x = std::log(w) + eps;
      if (x <= log_d0 && x >= floor) grid.push_back(x);
    }
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());
  for (double x : grid) {
    const double mapped = log_d0 - 2.0 * dressing_sum(c, x, v);
    if (mapped >= x) return mapped - log_d0;
  }
  return floor - log_d0;
}

inline CouplingSpectrum random_system(std::mt19937_64& rng, double& delta0, int max_modes = 5) {
  std::uniform_int_distribution<int> count(1, max_modes);
  std::uniform_real_distribution<double> freq(0.5, 3.0);
  std::uniform_real_distribution<double> coupling(0.0, 1.2);
  std::uniform_real_distribution<double> split(0.4, 2.5);
  const int n = count(rng);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = freq(rng);
    g[static_cast<std::size_t>(i)] = coupling(rng) * w[static_cast<std::size_t>(i)];
  }
  delta0 = split(rng);
  return spectrum(w, g);
}

inline SingleExcitationState random_state(std::mt19937_64& rng, std::size_t modes) {
  std::normal_distribution<double> n(0.0, 1.0);
  SingleExcitationState s;
  s.amplitudes.resize(static_cast<Eigen::Index>(modes) + 1);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) s.amplitudes(i) = cd(n(rng), n(rng));
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

// Embeds the one-excitation state in qubit (x) modes with every subsystem a
// two-level factor, traces out everything except `keep`, and returns the von
// Neumann entropy of what is left. Subsystem 0 is the qubit, 1..N the modes.
inline double partial_trace_entropy(const SingleExcitationState& psi, const std::vector<int>& keep) {
  const int parts = static_cast<int>(psi.amplitudes.size());
  const std::size_t dim = std::size_t{1} << parts;
  std::vector<cd> full(dim, 0.0);
  for (int p = 0; p < parts; ++p) full[std::size_t{1} << p] = psi.amplitudes(p);

  const int k = static_cast<int>(keep.size());
  const Eigen::Index rdim = Eigen::Index{1} << k;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(rdim, rdim);
  auto kept_index = [&](std::size_t basis) {
    Eigen::Index r = 0;
    for (int i = 0; i < k; ++i) r |= static_cast<Eigen::Index>((basis >> keep[i]) & 1u) << i;
    return r;
  };
  auto env_index = [&](std::size_t basis) {
    std::size_t e = basis;
    for (int i = 0; i < k; ++i) e &= ~(std::size_t{1} << keep[i]);
    return e;
  };
  for (std::size_t a = 0; a < dim; ++a) {
    if (full[a] == 0.0) continue;
    for (std::size_t b = 0; b < dim; ++b) {
      if (full[b] == 0.0 || env_index(a) != env_index(b)) continue;
      rho(kept_index(a), kept_index(b)) += full[a] * std::conj(full[b]);
    }
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho).eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-300) s -= ev(i) * std::log(ev(i));
  }
  return s;
}

}  // namespace oracles
