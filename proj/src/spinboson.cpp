#include "metaline/spinboson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "metaline/error.hpp"
#include "metaline/parallel.hpp"

namespace metaline {

namespace {

void require_ascending(std::span<const double> grid, const char* who, const char* name) {
  if (grid.empty()) throw DomainError(fmt::format("{}: {} grid is empty", who, name));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw DomainError(fmt::format("{}: {} grid entry {} is not a finite non-negative value", who,
                                    name, i));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError(fmt::format("{}: {} grid must be strictly ascending", who, name));
    }
  }
}

}  // namespace

double RenormResult::ratio() const { return std::exp(log_ratio); }

double dressing_amplitude(double g, double omega, DressingVariant variant) {
  const double x = g / omega;
  return variant == DressingVariant::kStandard ? x : x * x;
}

RenormResult renormalize(const CouplingSpectrum& couplings, double delta0, DressingVariant variant,
                         const RenormOptions& options) {
  const std::size_t n = couplings.frequencies.size();
  if (n == 0) throw DomainError("renormalize: coupling spectrum is empty");
  if (couplings.g.size() != n) {
    throw DomainError(fmt::format("renormalize: {} couplings for {} modes", couplings.g.size(), n));
  }
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) {
    throw DomainError(fmt::format("renormalize: delta0 must be positive, got {}", delta0));
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (!(couplings.frequencies[m] > 0.0) || !std::isfinite(couplings.frequencies[m])) {
      throw DomainError(fmt::format("renormalize: mode {} has non-positive frequency", m));
    }
    if (!std::isfinite(couplings.g[m])) {
      throw DomainError(fmt::format("renormalize: coupling {} is not finite", m));
    }
  }

  // Modes by descending frequency; prefix[k] is the dressing of the k fastest.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return couplings.frequencies[a] > couplings.frequencies[b];
  });
  std::vector<double> log_w(n);
  std::vector<double> prefix(n + 1, 0.0);
  std::vector<double> lambda(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = order[k];
    lambda[m] = dressing_amplitude(couplings.g[m], couplings.frequencies[m], variant);
    log_w[k] = std::log(couplings.frequencies[m]);
    prefix[k + 1] = prefix[k] + lambda[m] * lambda[m];
  }
  auto included = [&](double log_delta) {
    // Number of modes with w > delta, strictly.
    std::size_t lo = 0;
    std::size_t hi = n;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (log_w[mid] > log_delta) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  RenormResult out;
  out.delta0 = delta0;
  const double log_d0 = std::log(delta0);
  double log_d = log_d0;
  out.trace.push_back(log_d);
  for (out.iterations = 1; out.iterations <= options.max_iterations; ++out.iterations) {
    const double next = log_d0 - 2.0 * prefix[included(log_d)];
    out.trace.push_back(next);
    const double change = std::abs(std::expm1(next - log_d));
    log_d = next;
    if (change <= options.tolerance) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) out.iterations = options.max_iterations;

  const std::size_t count = included(log_d);
  out.lambdas.assign(n, 0.0);
  for (std::size_t k = 0; k < count; ++k) out.lambdas[order[k]] = lambda[order[k]];
  out.cat_size = prefix[count];
  out.log_ratio = log_d - log_d0;
  out.delta_eff = delta0 * std::exp(out.log_ratio);
  out.phase = out.log_ratio < std::log(options.localization_threshold) ? Phase::kLocalized
                                                                       : Phase::kDelocalized;
  return out;
}

std::vector<JumpEvent> detect_jumps(const std::function<double(double)>& log_delta,
                                    std::span<const double> g_grid,
                                    std::span<const double> log_values,
                                    const JumpDetector& detector) {
  if (g_grid.size() != log_values.size()) {
    throw DomainError("detect_jumps: grid and values differ in length");
  }
  const double trigger = std::log(detector.factor);
  std::vector<JumpEvent> events;
  for (std::size_t i = 0; i + 1 < g_grid.size(); ++i) {
    if (!(log_values[i] - log_values[i + 1] > trigger)) continue;
    double lo = g_grid[i];
    double hi = g_grid[i + 1];
    double f_lo = log_values[i];
    double f_hi = log_values[i + 1];
    while (hi - lo > detector.relative_width * hi) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = log_delta(mid);
      if (f_lo - f_mid >= f_mid - f_hi) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
    }
    if (f_lo - f_hi > trigger) {
      events.push_back({lo, hi, (f_lo - f_hi) / std::numbers::ln10});
    }
  }
  return events;
}

CouplingSweep sweep_coupling(const CouplingSpectrum& shape, double delta0,
                             std::span<const double> g_grid, const SweepOptions& options) {
  require_ascending(g_grid, "sweep_coupling", "g");
  CouplingSweep out;
  out.delta0 = delta0;
  out.g.assign(g_grid.begin(), g_grid.end());
  auto profile_at = [&](double g) {
    return renormalize(rescale(shape, g), delta0, options.variant, options.renorm);
  };
  auto flat_at = [&](double g) {
    return renormalize(flat_profile(shape, g), delta0, options.variant, options.renorm);
  };
  std::vector<double> lp;
  std::vector<double> lf;
  for (double g : g_grid) {
    out.profile.push_back(profile_at(g));
    out.flat.push_back(flat_at(g));
    lp.push_back(out.profile.back().log_ratio);
    lf.push_back(out.flat.back().log_ratio);
  }
  out.jumps = detect_jumps([&](double g) { return profile_at(g).log_ratio; }, g_grid, lp,
                           options.detector);
  out.flat_jumps = detect_jumps([&](double g) { return flat_at(g).log_ratio; }, g_grid, lf,
                                options.detector);
  return out;
}

Phase PhaseDiagram::phase(Eigen::Index row, Eigen::Index col, double threshold) const {
  return log_ratio(row, col) < std::log(threshold) ? Phase::kLocalized : Phase::kDelocalized;
}

PhaseDiagram phase_diagram(const CouplingSpectrum& shape, std::span<const double> g_grid,
                           std::span<const double> delta0_grid, const SweepOptions& options,
                           unsigned threads) {
  require_ascending(g_grid, "phase_diagram", "g");
  require_ascending(delta0_grid, "phase_diagram", "delta0");
  if (!(delta0_grid.front() > 0.0)) throw DomainError("phase_diagram: delta0 must be positive");

  const auto rows = static_cast<Eigen::Index>(delta0_grid.size());
  const auto cols = static_cast<Eigen::Index>(g_grid.size());
  PhaseDiagram out;
  out.g_axis.assign(g_grid.begin(), g_grid.end());
  out.delta0_axis.assign(delta0_grid.begin(), delta0_grid.end());
  out.delta_eff.resize(rows, cols);
  out.log_ratio.resize(rows, cols);
  out.boundary.resize(delta0_grid.size());
  const double localized = std::log(options.renorm.localization_threshold);

  parallel_for(delta0_grid.size(), threads, [&](std::size_t r) {
    const double delta0 = delta0_grid[r];
    auto log_ratio_at = [&](double g) {
      return renormalize(rescale(shape, g), delta0, options.variant, options.renorm).log_ratio;
    };
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const RenormResult res =
          renormalize(rescale(shape, g_grid[static_cast<std::size_t>(c)]), delta0,
                      options.variant, options.renorm);
      out.delta_eff(row, c) = res.delta_eff;
      out.log_ratio(row, c) = res.log_ratio;
    }

    BoundaryPoint& b = out.boundary[r];
    b.delta0 = delta0;
    Eigen::Index first = 0;
    while (first < cols && !(out.log_ratio(row, first) < localized)) ++first;
    if (first == cols) return;
    b.found = true;
    if (first == 0) {
      b.g_star = g_grid.front();
      return;
    }
    double lo = g_grid[static_cast<std::size_t>(first - 1)];
    double hi = g_grid[static_cast<std::size_t>(first)];
    double f_lo = out.log_ratio(row, first - 1);
    double f_hi = out.log_ratio(row, first);
    while (hi - lo > options.detector.relative_width * hi) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = log_ratio_at(mid);
      if (f_mid < localized) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
    }
    b.g_star = hi;
    b.log10_drop = (f_lo - f_hi) / std::numbers::ln10;
    b.discontinuous = f_lo - f_hi > std::log(options.detector.factor);
  });
  return out;
}

PhaseDiagram phase_diagram(const CircuitSpec& spec, const QubitSpec& qubit,
                           std::optional<FrequencyWindow> window, std::span<const double> g_grid,
                           std::span<const double> delta0_grid, const CouplingOptions& coupling,
                           const SweepOptions& options, unsigned threads) {
  require_ascending(delta0_grid, "phase_diagram", "delta0");
  const double w_ir = spec.omega_ir();
  if (!(delta0_grid.front() > w_ir)) {
    throw DomainError(fmt::format("phase_diagram: delta0 values must lie above the cutoff ({} rad/s)",
                                  w_ir));
  }
  const ModeSet modes = solve_modes(spec, window);
  if (modes.empty()) throw DomainError("phase_diagram: no modes inside the frequency window");
  QubitSpec probe = qubit;
  probe.delta0 = delta0_grid.front();
  probe.g_global = 1.0;
  const CouplingSpectrum shape = coupling_spectrum(modes, spec, probe, coupling);
  return phase_diagram(shape, g_grid, delta0_grid, options, threads);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (points == 0 || !(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw DomainError(fmt::format("log_grid: need 0 < lo <= hi and points >= 1 (got {}, {}, {})",
                                  lo, hi, points));
  }
  std::vector<double> out(points, lo);
  if (points == 1) return out;
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 1; i + 1 < points; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0 || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError(fmt::format("linear_grid: need lo <= hi and points >= 1 (got {}, {}, {})", lo,
                                  hi, points));
  }
  std::vector<double> out(points, lo);
  if (points == 1) return out;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 1; i + 1 < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace metaline
