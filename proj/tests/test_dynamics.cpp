#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "metaline/dynamics.hpp"
#include "metaline/error.hpp"
#include "oracles.hpp"

using namespace metaline;
using namespace oracles;

TEST_CASE("rotating-wave hamiltonian") {
  SUBCASE("resonant single mode") {
    const Eigen::MatrixXd h = build_rwa_hamiltonian(spectrum({5.0}, {0.3}), 5.0);
    Eigen::MatrixXd expected(2, 2);
    expected << 5.0, 0.3, 0.3, 5.0;
    CHECK(h == expected);
  }
  SUBCASE("no coupling is diagonal") {
    const Eigen::MatrixXd h = build_rwa_hamiltonian(spectrum({1.0, 2.0, 3.0}, {0, 0, 0}), 1.5);
    CHECK(h.isApprox(Eigen::MatrixXd(h.diagonal().asDiagonal())));
  }
  SUBCASE("arrowhead") {
    const Eigen::MatrixXd h = build_rwa_hamiltonian(spectrum({1.0, 2.0, 3.0}, {0.1, 0.2, 0.3}), 1.5);
    for (Eigen::Index i = 1; i < 4; ++i) {
      for (Eigen::Index j = 1; j < 4; ++j) {
        if (i != j) CHECK(h(i, j) == 0.0);
      }
      CHECK(h(0, i) == h(i, 0));
    }
    CHECK(h(0, 2) == 0.2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_rwa_hamiltonian(spectrum({}, {}), 1.0), DomainError);
    CouplingSpectrum bad = spectrum({1.0, 2.0}, {0.1, 0.2});
    bad.g.pop_back();
    CHECK_THROWS_AS(build_rwa_hamiltonian(bad, 1.0), DomainError);
    CHECK_THROWS_AS(RwaPropagator(Eigen::MatrixXd{{1.0, 2.0}, {0.0, 1.0}}), DomainError);
  }
}

TEST_CASE("propagation") {
  const double g = 0.37;
  const RwaPropagator resonant(build_rwa_hamiltonian(spectrum({2.0}, {g}), 2.0));
  const auto psi0 = SingleExcitationState::qubit_excited(1);

  SUBCASE("Rabi oscillation") {
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.1 * i / g;
      const auto psi = resonant.evolve(psi0, t);
      // The common phase exp(-i w t) drops out of |c0|; compare the rotated amplitude.
      const cd c0 = psi.c0() * std::polar(1.0, 2.0 * t);
      CHECK(std::abs(c0 - std::cos(g * t)) <= 1e-6);
    }
  }
  SUBCASE("zero time is exact") {
    const auto psi = resonant.evolve(psi0, 0.0);
    CHECK(psi.amplitudes == psi0.amplitudes);
  }
  SUBCASE("decoupled qubit") {
    const RwaPropagator free(build_rwa_hamiltonian(spectrum({1.0, 3.0}, {0.0, 0.0}), 2.0));
    const auto start = SingleExcitationState::qubit_excited(2);
    for (double t : {0.5, 3.0, 40.0}) CHECK(std::abs(free.evolve(start, t).c0()) == doctest::Approx(1.0));
  }
  SUBCASE("norm, energy and time reversal on random systems") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + trial % 8;
      std::vector<double> w(n);
      std::vector<double> gg(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = u(rng);
        gg[i] = 0.1 * u(rng);
      }
      const Eigen::MatrixXd h = build_rwa_hamiltonian(spectrum(w, gg), u(rng));
      const RwaPropagator prop(h);
      const auto start = random_state(rng, n);
      const double e0 = prop.energy(start);
      const double gscale = gg[0];
      for (int k = 0; k <= 10; ++k) {
        const double t = k / gscale;
        const auto psi = prop.evolve(start, t);
        CHECK(std::abs(psi.norm_squared() - 1.0) <= 1e-9);
        CHECK(std::abs(prop.energy(psi) - e0) <= 1e-8 * std::abs(e0));
        const auto back = prop.evolve(psi, -t);
        CHECK((back.amplitudes - start.amplitudes).norm() <= 1e-8);
      }
    }
  }
  SUBCASE("input checks") {
    CHECK_THROWS_AS(resonant.evolve(SingleExcitationState::qubit_excited(2), 1.0), DomainError);
    SingleExcitationState unnormalized = psi0;
    unnormalized.amplitudes(0) = 2.0;
    CHECK_THROWS_AS(resonant.evolve(unnormalized, 1.0), DomainError);
  }
  SUBCASE("batch evolution") {
    const std::vector<double> times{0.0, 1.0, 2.0};
    const auto states = evolve(build_rwa_hamiltonian(spectrum({2.0}, {g}), 2.0), psi0, times);
    REQUIRE(states.size() == 3);
    CHECK((states[2].amplitudes - resonant.evolve(psi0, 2.0).amplitudes).norm() == 0.0);
  }
}

TEST_CASE("entropies") {
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));

  SUBCASE("closed forms") {
    const auto excited = SingleExcitationState::qubit_excited(3);
    CHECK(entropy_qubit(excited) == 0.0);

    SingleExcitationState photon;
    photon.amplitudes = Eigen::VectorXcd::Zero(4);
    photon.amplitudes(2) = 1.0;
    CHECK(entropy_minus_mode(photon, 1) == 0.0);

    SingleExcitationState half;
    half.amplitudes = Eigen::VectorXcd::Zero(3);
    half.amplitudes(0) = half.amplitudes(1) = 1.0 / std::sqrt(2.0);
    CHECK(entropy_minus_mode(half, 1) == doctest::Approx(std::log(2.0)));

    const int n = 7;
    SingleExcitationState spread;
    spread.amplitudes = Eigen::VectorXcd::Constant(n + 1, 1.0 / std::sqrt(n));
    spread.amplitudes(0) = 0.0;
    for (int m = 0; m < n; ++m) {
      CHECK(entropy_minus_mode(spread, m) == doctest::Approx(binary_entropy(1.0 / n)));
      CHECK(entropy_minus_mode(spread, m) > entropy_qubit(spread));
    }
    CHECK_THROWS_AS(entropy_minus_mode(spread, n), DomainError);
  }
  SUBCASE("closed forms match the partial-trace oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + trial % 8;
      const auto psi = random_state(rng, n);
      CHECK(std::abs(entropy_qubit(psi) - partial_trace_entropy(psi, {0})) <= 1e-9);
      for (std::size_t m = 0; m < n; ++m) {
        // Tracing qubit and mode m leaves the other modes; a pure state has
        // equal entropy on both sides, so keep {qubit, mode m} instead.
        const double oracle = partial_trace_entropy(psi, {0, static_cast<int>(m) + 1});
        CHECK(std::abs(entropy_minus_mode(psi, m) - oracle) <= 1e-9);
      }
    }
  }
  SUBCASE("single mode leaves nothing entangled") {
    const auto rep = entropy_scan(build_rwa_hamiltonian(spectrum({2.0}, {0.2}), 2.0), 3.0);
    REQUIRE(rep.e_per_mode.size() == 1);
    CHECK(rep.e_per_mode[0] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("time zero report") {
    const auto rep = entropy_scan(build_rwa_hamiltonian(spectrum({1.0, 2.0}, {0.2, 0.1}), 1.5), 0.0);
    CHECK(rep.e_qubit == 0.0);
    for (double e : rep.e_per_mode) CHECK(e == 0.0);
    CHECK(rep.qubit_population == 1.0);
  }
}

TEST_CASE("weak-mode truncation") {
  CouplingSpectrum c = spectrum({1.0, 2.0, 3.0}, {0.1, 0.0001, 0.05});
  c.relative_profile = {1.0, 0.001 * 0.5, 0.5};
  const CouplingSpectrum t = truncate_weak_modes(c, 1e-3);
  CHECK(t.size() == 2);
  CHECK(t.frequencies == std::vector<double>{1.0, 3.0});
  CHECK(truncate_weak_modes(c, 0.0).size() == 3);
}
