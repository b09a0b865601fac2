#include "metaline/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "metaline/dispersion.hpp"
#include "metaline/error.hpp"

namespace metaline {

namespace {

void require_index(const ModeSet& modes, std::size_t n, const char* who) {
  if (n >= modes.size()) {
    throw DomainError(fmt::format("{}: mode index {} out of range ({} modes)", who, n, modes.size()));
  }
}

void require_rhtl(const ModeSet& modes, const CircuitSpec& spec, const char* who) {
  const auto last = static_cast<Eigen::Index>(spec.interface_node()) + spec.n_right;
  if (modes.interface_node != spec.interface_node() || last >= modes.profiles.rows()) {
    throw DomainError(fmt::format("{}: mode set does not match the circuit layout", who));
  }
}

[[noreturn]] void report_cholesky_failure(const Eigen::MatrixXd& cap) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cap);
  const Eigen::VectorXd d = ldlt.vectorD();
  Eigen::Index where = 0;
  const double smallest = d.size() ? d.minCoeff(&where) : 0.0;
  throw NumericalError(fmt::format(
      "ill-conditioned circuit: capacitance matrix is not positive definite "
      "(smallest pivot {:.6g} at pivot {})",
      smallest, where));
}

}  // namespace

ModeSet solve_modes(const NetworkMatrices& mat, const SolveOptions& options) {
  const Eigen::Index n = mat.cap.rows();
  if (n == 0 || mat.cap.cols() != n || mat.inv_ind.rows() != n || mat.inv_ind.cols() != n) {
    throw DomainError("solve_modes: matrices must be square and of equal, nonzero size");
  }
  const double cap_scale = mat.cap.cwiseAbs().maxCoeff();
  const double ind_scale = mat.inv_ind.cwiseAbs().maxCoeff();
  if ((mat.cap - mat.cap.transpose()).cwiseAbs().maxCoeff() > 1e-12 * cap_scale ||
      (mat.inv_ind - mat.inv_ind.transpose()).cwiseAbs().maxCoeff() > 1e-12 * ind_scale) {
    throw DomainError("solve_modes: matrices must be symmetric");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(mat.cap);
  if (llt.info() != Eigen::Success) report_cholesky_failure(mat.cap);

  // A = L^-1 K L^-T is symmetric with the same eigenvalues as the pencil.
  const auto lower = llt.matrixL();
  Eigen::MatrixXd half = lower.solve(mat.inv_ind);
  Eigen::MatrixXd reduced = lower.solve(half.transpose());
  reduced = 0.5 * (reduced + reduced.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("solve_modes: symmetric eigensolver did not converge");
  }
  // v = L^-T y, which makes v^T cap v = y^T y = 1.
  const Eigen::MatrixXd flux = llt.matrixU().solve(eig.eigenvectors());
  const Eigen::VectorXd& lambda = eig.eigenvalues();

  const double top = std::sqrt(std::max(0.0, lambda.maxCoeff()));
  const double threshold = options.zero_mode_ratio * options.reference_omega.value_or(top);

  std::vector<Eigen::Index> keep;
  std::vector<double> omega;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = std::sqrt(std::max(0.0, lambda(i)));
    if (!(w > 0.0) || w < threshold) continue;
    if (options.window && !options.window->contains(w)) continue;
    keep.push_back(i);
    omega.push_back(w);
  }

  ModeSet out;
  out.node_positions = mat.node_positions;
  out.interface_node = options.sign_node;
  out.profiles.resize(n, static_cast<Eigen::Index>(keep.size()));

  const auto sign_node = std::clamp<Eigen::Index>(options.sign_node, 0, n - 1);
  std::vector<int> nodes(keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    Eigen::VectorXd v = flux.col(keep[c]);
    double anchor = v(sign_node);
    if (std::abs(anchor) <= 1e-12 * v.cwiseAbs().maxCoeff()) {
      // Interface sits on a node of this mode; fall back to the first
      // significant entry so the sign is still reproducible.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) > 1e-9 * v.cwiseAbs().maxCoeff()) {
          anchor = v(i);
          break;
        }
      }
    }
    if (anchor < 0.0) v = -v;
    out.profiles.col(static_cast<Eigen::Index>(c)) = v;
    nodes[c] = sign_changes(v);
  }

  // Eigen returns ascending eigenvalues; only exact ties need the node count.
  std::vector<std::size_t> order(keep.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (omega[a] != omega[b]) return omega[a] < omega[b];
    return nodes[a] < nodes[b];
  });
  out.frequencies.resize(order.size());
  Eigen::MatrixXd sorted(n, static_cast<Eigen::Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) {
    out.frequencies[c] = omega[order[c]];
    sorted.col(static_cast<Eigen::Index>(c)) = out.profiles.col(static_cast<Eigen::Index>(order[c]));
  }
  out.profiles = std::move(sorted);
  return out;
}

ModeSet solve_modes(const CircuitSpec& spec, std::optional<FrequencyWindow> window) {
  SolveOptions options;
  options.window = window;
  options.reference_omega = spec.omega_ir();
  options.sign_node = spec.interface_node();
  return solve_modes(build_matrices(spec), options);
}

Eigen::VectorXd voltage_profile(const ModeSet& modes, std::size_t n) {
  require_index(modes, n, "voltage_profile");
  return modes.frequencies[n] * modes.profiles.col(static_cast<Eigen::Index>(n));
}

int sign_changes(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) return 0;
  const double floor = 1e-9 * v.cwiseAbs().maxCoeff();
  int changes = 0;
  int last = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) <= floor) continue;
    const int s = v(i) > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int lhtl_envelope_nodes(const ModeSet& modes, std::size_t n) {
  require_index(modes, n, "lhtl_envelope_nodes");
  const Eigen::Index count = modes.interface_node + 1;
  Eigen::VectorXd env = modes.profiles.col(static_cast<Eigen::Index>(n)).head(count);
  for (Eigen::Index i = 1; i < count; i += 2) env(i) = -env(i);
  return sign_changes(env);
}

std::vector<double> rhtl_branch_currents(const ModeSet& modes, const CircuitSpec& spec,
                                         std::size_t n) {
  require_index(modes, n, "rhtl_branch_currents");
  require_rhtl(modes, spec, "rhtl_branch_currents");
  const double inv_l = 1.0 / (spec.l_right_per_len * spec.rhtl_cell());
  const auto col = modes.profiles.col(static_cast<Eigen::Index>(n));
  const Eigen::Index first = spec.interface_node();
  std::vector<double> current(static_cast<std::size_t>(spec.n_right));
  for (int j = 0; j < spec.n_right; ++j) {
    current[static_cast<std::size_t>(j)] = (col(first + j) - col(first + j + 1)) * inv_l;
  }
  return current;
}

double current_average(const ModeSet& modes, const CircuitSpec& spec, std::size_t n, double x0,
                       double extent) {
  const double length = spec.rhtl_length;
  const double slack = 1e-12 * length;
  if (!(extent >= 0.0) || x0 < -slack || x0 + extent > length + slack) {
    throw DomainError(fmt::format(
        "current_average: footprint [{}, {}] m outside the right-handed strip [0, {}] m", x0,
        x0 + extent, length));
  }
  const std::vector<double> current = rhtl_branch_currents(modes, spec, n);
  const double dx = spec.rhtl_cell();
  const int branches = spec.n_right;

  // Piecewise-linear interpolant through (j + 1/2) dx, flat beyond the ends.
  auto at = [&](double x) {
    const double u = x / dx - 0.5;
    if (u <= 0.0) return current.front();
    if (u >= branches - 1) return current.back();
    const auto j = static_cast<std::size_t>(std::floor(u));
    const double t = u - static_cast<double>(j);
    return (1.0 - t) * current[j] + t * current[j + 1];
  };

  if (extent == 0.0) return std::abs(at(x0));

  const double a = x0;
  const double b = x0 + extent;
  std::vector<double> knots{a};
  for (int j = 0; j < branches; ++j) {
    const double xm = (j + 0.5) * dx;
    if (xm > a && xm < b) knots.push_back(xm);
  }
  knots.push_back(b);
  double integral = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    integral += 0.5 * (at(knots[i - 1]) + at(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return std::abs(integral / extent);
}

double current_antinode(const ModeSet& modes, const CircuitSpec& spec, std::size_t n) {
  const std::vector<double> current = rhtl_branch_currents(modes, spec, n);
  std::size_t best = 0;
  for (std::size_t j = 1; j < current.size(); ++j) {
    if (std::abs(current[j]) > std::abs(current[best])) best = j;
  }
  return (static_cast<double>(best) + 0.5) * spec.rhtl_cell();
}

double footprint_at_antinode(const ModeSet& modes, const CircuitSpec& spec, double target_omega,
                             double extent) {
  if (modes.empty()) throw DomainError("footprint_at_antinode: empty mode set");
  if (!(extent >= 0.0) || extent > spec.rhtl_length) {
    throw DomainError(fmt::format("footprint_at_antinode: extent {} m does not fit the strip", extent));
  }
  std::size_t best = 0;
  for (std::size_t n = 1; n < modes.size(); ++n) {
    if (std::abs(modes.frequencies[n] - target_omega) <
        std::abs(modes.frequencies[best] - target_omega)) {
      best = n;
    }
  }
  const double center = current_antinode(modes, spec, best);
  return std::clamp(center - 0.5 * extent, 0.0, spec.rhtl_length - extent);
}

void QubitSpec::validate(const CircuitSpec& spec) const {
  std::vector<std::string> bad;
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) bad.emplace_back("delta0");
  if (!(extent > 0.0) || !std::isfinite(extent)) bad.emplace_back("extent");
  if (!(g_global >= 0.0) || !std::isfinite(g_global)) bad.emplace_back("g_global");
  const double slack = 1e-12 * spec.rhtl_length;
  if (!(position >= -slack) || !(position + extent <= spec.rhtl_length + slack)) {
    bad.emplace_back("position");
  }
  if (!bad.empty()) {
    std::string list;
    for (const auto& f : bad) list += (list.empty() ? "" : ", ") + f;
    throw ValidationError("invalid qubit: " + list, bad);
  }
}

CouplingSpectrum coupling_spectrum(const ModeSet& modes, const CircuitSpec& spec,
                                   const QubitSpec& qubit, const CouplingOptions& options) {
  if (modes.empty()) throw DomainError("coupling_spectrum: empty mode set");
  qubit.validate(spec);

  const double w_ir = spec.omega_ir();
  const double background = rhtl_background_density(spec);
  std::vector<double> weight(modes.size());
  for (std::size_t n = 0; n < modes.size(); ++n) {
    double avg = current_average(modes, spec, n, qubit.position, qubit.extent);
    if (options.shape == CurrentShape::kPeakNormalized) {
      const std::vector<double> current = rhtl_branch_currents(modes, spec, n);
      double peak = 0.0;
      for (double c : current) peak = std::max(peak, std::abs(c));
      avg = peak > 0.0 ? avg / peak : 0.0;
    }
    double scale = 1.0;
    if (options.normalization == CouplingNormalization::kDensityWeighted) {
      const double w = modes.frequencies[n];
      scale = background + (w > w_ir ? dom_approx(w, spec) : 0.0);
    }
    weight[n] = avg * scale;
  }
  const double top = *std::max_element(weight.begin(), weight.end());
  if (!(top > 0.0)) {
    throw NumericalError("coupling_spectrum: the qubit footprint sees no current in any mode");
  }

  CouplingSpectrum out;
  out.frequencies = modes.frequencies;
  out.relative_profile.resize(modes.size());
  for (std::size_t n = 0; n < modes.size(); ++n) out.relative_profile[n] = weight[n] / top;
  return rescale(out, qubit.g_global);
}

CouplingSpectrum rescale(const CouplingSpectrum& spectrum, double g_global) {
  CouplingSpectrum out = spectrum;
  out.g.resize(out.relative_profile.size());
  for (std::size_t n = 0; n < out.g.size(); ++n) out.g[n] = g_global * out.relative_profile[n];
  return out;
}

CouplingSpectrum flat_profile(const CouplingSpectrum& spectrum, double g_global) {
  CouplingSpectrum out = spectrum;
  std::fill(out.relative_profile.begin(), out.relative_profile.end(), 1.0);
  return rescale(out, g_global);
}

DensityOfModes dom_numeric(std::span<const double> frequencies, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("dom_numeric: bin_width must be positive");
  if (frequencies.size() < 2) throw DomainError("dom_numeric: needs at least two modes");

  DensityOfModes out;
  out.bin_start = frequencies.front();
  out.bin_width = bin_width;
  // The 1e-9 nudge keeps points that sit on a bin edge (up to rounding) in the upper bin.
  auto bin_of = [&](double w) {
    return static_cast<std::size_t>(std::floor((w - out.bin_start) / bin_width + 1e-9));
  };
  const std::size_t bins = bin_of(frequencies.back()) + 1;
  std::vector<double> counts(bins, 0.0);
  for (double w : frequencies) counts[std::min(bin_of(w), bins - 1)] += 1.0;
  out.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) out.density[b] = counts[b] / bin_width;

  for (std::size_t n = 0; n + 1 < frequencies.size(); ++n) {
    const double gap = frequencies[n + 1] - frequencies[n];
    if (!(gap > 0.0)) continue;
    out.spacing_omega.push_back(0.5 * (frequencies[n] + frequencies[n + 1]));
    out.spacing_density.push_back(1.0 / gap);
  }
  return out;
}

}  // namespace metaline
