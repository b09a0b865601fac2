#include "metaline/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "metaline/error.hpp"

namespace metaline {

namespace {

using units::ghz_to_rad;
using units::rad_to_ghz;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++line;
      std::string_view raw = text.substr(pos, end - pos);
      pos = end + 1;
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (raw.empty()) continue;
      const auto eq = raw.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(fmt::format("line {}: expected 'key = value'", line), line, "");
      }
      const std::string key(trim(raw.substr(0, eq)));
      const std::string value(trim(raw.substr(eq + 1)));
      if (key.empty() || key.find('.') == std::string::npos) {
        throw ConfigError(fmt::format("line {}: key '{}' must be 'section.name'", line, key), line,
                          key);
      }
      if (value.empty()) {
        throw ConfigError(fmt::format("line {}: {} has no value", line, key), line, key);
      }
      if (const auto it = entries_.find(key); it != entries_.end()) {
        throw ConfigError(fmt::format("line {}: {} already set on line {}", line, key,
                                      it->second.line),
                          line, key);
      }
      entries_[key] = {value, line};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  int line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const int line = line_of(key);
    if (line > 0) throw ConfigError(fmt::format("line {}: {}: {}", line, key, why), line, key);
    throw ConfigError(fmt::format("{}: {}", key, why), 0, key);
  }

  std::optional<std::string> text(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) {
    const auto s = text(key);
    if (!s) return std::nullopt;
    return to_double(key, *s);
  }

  double number_or(const std::string& key, double fallback) {
    return number(key).value_or(fallback);
  }

  double require(const std::string& key) {
    const auto v = number(key);
    if (!v) fail(key, "required key is missing");
    return *v;
  }

  double positive(const std::string& key, double v) const {
    if (!(v > 0.0)) fail(key, fmt::format("must be positive, got {}", v));
    return v;
  }

  double non_negative(const std::string& key, double v) const {
    if (!(v >= 0.0)) fail(key, fmt::format("must be non-negative, got {}", v));
    return v;
  }

  std::optional<long long> integer(const std::string& key) {
    const auto s = text(key);
    if (!s) return std::nullopt;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || ptr != s->data() + s->size()) fail(key, "expected an integer");
    return v;
  }

  std::vector<double> list(const std::string& key) {
    std::vector<double> out;
    const auto s = text(key);
    if (!s) return out;
    std::string_view rest = *s;
    while (true) {
      const auto comma = rest.find(',');
      out.push_back(to_double(key, std::string(trim(rest.substr(0, comma)))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto s = text(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "yes" || *s == "1") return true;
    if (*s == "false" || *s == "no" || *s == "0") return false;
    fail(key, fmt::format("expected true or false, got '{}'", *s));
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  double to_double(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail(key, fmt::format("'{}' is not a number", s));
    }
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

void require_ascending(Reader& r, const std::string& key, const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) r.fail(key, "values must be strictly ascending");
  }
}

// Shortest decimal that reads back to the same value after `from_text`.
template <class F>
std::string exact_text(double value, double scale, F from_text) {
  auto reads_back = [&](const std::string& text) {
    double parsed = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), parsed);
    return from_text(parsed) == value;
  };
  const double shown = value * scale;
  for (int digits = 1; digits <= 17; ++digits) {
    std::string text = fmt::format("{:.{}g}", shown, digits);
    if (reads_back(text)) return text;
  }
  double up = shown;
  double down = shown;
  for (int step = 0; step < 8; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    for (double candidate : {up, down}) {
      std::string text = fmt::format("{:.17g}", candidate);
      if (reads_back(text)) return text;
    }
  }
  return fmt::format("{:.17g}", shown);
}

std::string plain_text(double v) {
  return exact_text(v, 1.0, [](double x) { return x; });
}

std::string ghz_text(double rad) {
  return exact_text(rad, 1.0 / (units::kTwoPi * units::kGiga),
                    [](double x) { return units::ghz_to_rad(x); });
}

std::string join_list(const std::vector<double>& v, bool ghz) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += fmt::format("{}{}", i ? ", " : "", ghz ? ghz_text(v[i]) : plain_text(v[i]));
  }
  return out;
}

void parse_circuit(Reader& r, CircuitSpec& c) {
  const auto n_left = r.integer("circuit.n_left");
  if (!n_left) r.fail("circuit.n_left", "required key is missing");
  c.n_left = static_cast<int>(*n_left);

  const bool explicit_lc = r.has("circuit.c_left") || r.has("circuit.l_left");
  std::optional<double> z0 = r.number("circuit.z0");
  std::optional<double> f_ir = r.number("circuit.f_ir_ghz");
  if (explicit_lc) {
    if (z0 || f_ir) r.fail("circuit.c_left", "give either c_left/l_left or z0/f_ir_ghz, not both");
    c.c_left = r.positive("circuit.c_left", r.require("circuit.c_left"));
    c.l_left = r.positive("circuit.l_left", r.require("circuit.l_left"));
  } else {
    if (!z0) r.fail("circuit.z0", "required key is missing (or give c_left and l_left)");
    if (!f_ir) r.fail("circuit.f_ir_ghz", "required key is missing (or give c_left and l_left)");
    const auto d = design_from_impedance(r.positive("circuit.z0", *z0),
                                         ghz_to_rad(r.positive("circuit.f_ir_ghz", *f_ir)));
    c.c_left = d.c_left;
    c.l_left = d.l_left;
  }
  c.cell_pitch = r.positive("circuit.cell_pitch", r.require("circuit.cell_pitch"));
  c.rhtl_length = r.positive("circuit.rhtl_length", r.require("circuit.rhtl_length"));
  if (const auto n = r.integer("circuit.n_right")) c.n_right = static_cast<int>(*n);

  if (r.has("circuit.c_right_per_len") || r.has("circuit.l_right_per_len")) {
    c.c_right_per_len = r.positive("circuit.c_right_per_len", r.require("circuit.c_right_per_len"));
    c.l_right_per_len = r.positive("circuit.l_right_per_len", r.require("circuit.l_right_per_len"));
  } else {
    // Default strip: impedance matched to the ladder, one wavelength long at the cutoff.
    const double w_ir = 0.5 / std::sqrt(c.c_left * c.l_left);
    const double z = r.positive("circuit.rhtl_impedance",
                                r.number_or("circuit.rhtl_impedance", z0.value_or(
                                    std::sqrt(c.l_left / c.c_left))));
    const double v = r.positive("circuit.rhtl_velocity",
                                r.number_or("circuit.rhtl_velocity",
                                            c.rhtl_length * w_ir / units::kTwoPi));
    const auto d = rhtl_from_impedance(z, v);
    c.c_right_per_len = d.c_per_len;
    c.l_right_per_len = d.l_per_len;
  }
  if (const auto v = r.number("circuit.c_end_left")) c.c_end_left = r.positive("circuit.c_end_left", *v);
  if (const auto v = r.number("circuit.c_end_right")) c.c_end_right = r.positive("circuit.c_end_right", *v);

  try {
    c.validate();
  } catch (const ValidationError& e) {
    const std::string key = "circuit." + (e.fields().empty() ? std::string() : e.fields().front());
    r.fail(key, e.what());
  }
}

void parse_qubit(Reader& r, QubitConfig& q) {
  if (const auto v = r.number("qubit.delta0_ghz")) q.delta0 = ghz_to_rad(r.positive("qubit.delta0_ghz", *v));
  if (const auto s = r.text("qubit.position"); s && *s != "auto") {
    q.position = r.non_negative("qubit.position", r.require("qubit.position"));
  }
  if (const auto v = r.number("qubit.anchor_ghz")) q.anchor = ghz_to_rad(r.positive("qubit.anchor_ghz", *v));
  if (const auto v = r.number("qubit.extent")) q.extent = r.positive("qubit.extent", *v);
  if (const auto v = r.number("qubit.g_ghz")) q.g_global = ghz_to_rad(r.non_negative("qubit.g_ghz", *v));
}

void parse_modes(Reader& r, RunConfig& cfg) {
  if (const auto v = r.number("modes.f_min_ghz")) cfg.modes.f_min = ghz_to_rad(r.non_negative("modes.f_min_ghz", *v));
  if (const auto v = r.number("modes.f_max_ghz")) cfg.modes.f_max = ghz_to_rad(r.positive("modes.f_max_ghz", *v));
  if (const auto v = r.number("modes.bin_width_ghz")) cfg.modes.bin_width = ghz_to_rad(r.positive("modes.bin_width_ghz", *v));

  if (const auto s = r.text("coupling.normalization")) {
    if (*s == "spatial") {
      cfg.coupling.normalization = CouplingNormalization::kSpatial;
    } else if (*s == "density") {
      cfg.coupling.normalization = CouplingNormalization::kDensityWeighted;
    } else {
      r.fail("coupling.normalization", fmt::format("expected spatial or density, got '{}'", *s));
    }
  }
  if (const auto s = r.text("coupling.current_shape")) {
    if (*s == "peak") {
      cfg.coupling.shape = CurrentShape::kPeakNormalized;
    } else if (*s == "raw") {
      cfg.coupling.shape = CurrentShape::kRaw;
    } else {
      r.fail("coupling.current_shape", fmt::format("expected peak or raw, got '{}'", *s));
    }
  }
}

void parse_dynamics(Reader& r, DynamicsConfig& d) {
  if (r.has("dynamics.tg_list")) {
    d.tg = r.list("dynamics.tg_list");
    for (double t : d.tg) r.non_negative("dynamics.tg_list", t);
    require_ascending(r, "dynamics.tg_list", d.tg);
  } else {
    const double lo = r.non_negative("dynamics.tg_min", r.number_or("dynamics.tg_min", 0.0));
    const double hi = r.non_negative("dynamics.tg_max", r.number_or("dynamics.tg_max", 10.0));
    const double step = r.positive("dynamics.tg_step", r.number_or("dynamics.tg_step", 1.0));
    if (hi < lo) r.fail("dynamics.tg_max", "must not be below tg_min");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    d.tg.clear();
    for (std::size_t i = 0; i < count; ++i) d.tg.push_back(lo + step * static_cast<double>(i));
  }
  d.truncate_below = r.non_negative("dynamics.truncate_below",
                                    r.number_or("dynamics.truncate_below", 0.0));
}

void parse_renorm(Reader& r, RenormConfig& rc) {
  if (const auto s = r.text("renorm.variant")) {
    if (*s == "standard") {
      rc.variant = DressingVariant::kStandard;
    } else if (*s == "literal") {
      rc.variant = DressingVariant::kLiteral;
    } else {
      r.fail("renorm.variant", fmt::format("expected standard or literal, got '{}'", *s));
    }
  }
  if (r.has("renorm.g_list_ghz")) {
    for (double g : r.list("renorm.g_list_ghz")) {
      rc.g.push_back(ghz_to_rad(r.non_negative("renorm.g_list_ghz", g)));
    }
    require_ascending(r, "renorm.g_list_ghz", rc.g);
    return;
  }
  if (!r.has("renorm.g_min_ghz") && !r.has("renorm.g_max_ghz")) return;
  const double lo = r.positive("renorm.g_min_ghz", r.require("renorm.g_min_ghz"));
  const double hi = r.positive("renorm.g_max_ghz", r.require("renorm.g_max_ghz"));
  if (!(hi > lo)) r.fail("renorm.g_max_ghz", "must exceed g_min_ghz");
  const auto points = r.integer("renorm.g_points").value_or(200);
  if (points < 2) r.fail("renorm.g_points", "need at least two points");
  const bool zero = r.boolean("renorm.include_zero").value_or(false);
  if (zero) rc.g.push_back(0.0);
  for (double g : log_grid(lo, hi, static_cast<std::size_t>(points))) rc.g.push_back(ghz_to_rad(g));
}

void parse_phase(Reader& r, PhaseConfig& p) {
  if (r.has("phase.delta0_ratio_list")) {
    p.delta0_ratio = r.list("phase.delta0_ratio_list");
    for (double v : p.delta0_ratio) r.positive("phase.delta0_ratio_list", v);
    require_ascending(r, "phase.delta0_ratio_list", p.delta0_ratio);
    return;
  }
  if (!r.has("phase.delta0_min_ratio") && !r.has("phase.delta0_max_ratio")) return;
  const double lo = r.positive("phase.delta0_min_ratio", r.require("phase.delta0_min_ratio"));
  const double hi = r.positive("phase.delta0_max_ratio", r.require("phase.delta0_max_ratio"));
  const auto points = r.integer("phase.delta0_points").value_or(10);
  if (points < 1) r.fail("phase.delta0_points", "need at least one point");
  if (points > 1 && !(hi > lo)) r.fail("phase.delta0_max_ratio", "must exceed delta0_min_ratio");
  p.delta0_ratio = linear_grid(lo, hi, static_cast<std::size_t>(points));
}

void parse_disorder(Reader& r, DisorderConfig& d) {
  d.sigma = r.non_negative("disorder.sigma", r.number_or("disorder.sigma", 0.0));
  if (d.sigma >= 0.5) r.fail("disorder.sigma", "must be below 0.5");
  const auto seeds = r.integer("disorder.seeds").value_or(1);
  if (seeds < 1) r.fail("disorder.seeds", "need at least one seed");
  d.seeds = static_cast<int>(seeds);
  const auto base = r.integer("disorder.seed_base").value_or(1);
  if (base < 0) r.fail("disorder.seed_base", "must be non-negative");
  d.seed_base = static_cast<std::uint64_t>(base);
  if (const auto v = r.number("disorder.band_min_ghz")) d.band_min = ghz_to_rad(r.non_negative("disorder.band_min_ghz", *v));
  if (const auto v = r.number("disorder.band_max_ghz")) d.band_max = ghz_to_rad(r.positive("disorder.band_max_ghz", *v));
  if (d.band_min && d.band_max && *d.band_max < *d.band_min) {
    r.fail("disorder.band_max_ghz", "must not be below band_min_ghz");
  }
}

}  // namespace

std::optional<FrequencyWindow> RunConfig::window() const {
  if (!modes.f_min && !modes.f_max) return std::nullopt;
  return FrequencyWindow{modes.f_min.value_or(0.0),
                         modes.f_max.value_or(std::numeric_limits<double>::infinity())};
}

RunConfig parse_config(std::string_view text) {
  Reader r(text);
  RunConfig cfg;
  parse_circuit(r, cfg.circuit);
  parse_qubit(r, cfg.qubit);
  parse_modes(r, cfg);
  if (cfg.modes.f_min && cfg.modes.f_max && *cfg.modes.f_max < *cfg.modes.f_min) {
    r.fail("modes.f_max_ghz", "must not be below f_min_ghz");
  }
  parse_dynamics(r, cfg.dynamics);
  parse_renorm(r, cfg.renorm);
  parse_phase(r, cfg.phase);
  parse_disorder(r, cfg.disorder);
  if (const auto s = r.text("output.dir")) cfg.output_dir = *s;
  if (const auto s = r.text("output.stem")) cfg.output_stem = *s;
  if (const auto n = r.integer("run.threads")) {
    if (*n < 0) r.fail("run.threads", "must be non-negative");
    cfg.threads = static_cast<unsigned>(*n);
  }
  r.reject_unused();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

static std::string echo_text(const RunConfig& cfg, bool with_run) {
  const auto& [circuit, qubit, modes, coupling, dynamics, renorm, phase, disorder, output_dir,
               output_stem, threads] = cfg;
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  auto num = [](double v) { return plain_text(v); };

  line("circuit.n_left", std::to_string(circuit.n_left));
  line("circuit.c_left", num(circuit.c_left));
  line("circuit.l_left", num(circuit.l_left));
  line("circuit.cell_pitch", num(circuit.cell_pitch));
  line("circuit.rhtl_length", num(circuit.rhtl_length));
  line("circuit.c_right_per_len", num(circuit.c_right_per_len));
  line("circuit.l_right_per_len", num(circuit.l_right_per_len));
  line("circuit.n_right", std::to_string(circuit.n_right));
  if (circuit.c_end_left) line("circuit.c_end_left", num(*circuit.c_end_left));
  if (circuit.c_end_right) line("circuit.c_end_right", num(*circuit.c_end_right));

  if (qubit.delta0 > 0.0) line("qubit.delta0_ghz", ghz_text((qubit.delta0)));
  line("qubit.position", qubit.position ? num(*qubit.position) : "auto");
  if (qubit.anchor > 0.0) line("qubit.anchor_ghz", ghz_text((qubit.anchor)));
  line("qubit.extent", num(qubit.extent));
  line("qubit.g_ghz", ghz_text((qubit.g_global)));

  if (modes.f_min) line("modes.f_min_ghz", ghz_text((*modes.f_min)));
  if (modes.f_max) line("modes.f_max_ghz", ghz_text((*modes.f_max)));
  line("modes.bin_width_ghz", ghz_text((modes.bin_width)));
  line("coupling.normalization",
       coupling.normalization == CouplingNormalization::kSpatial ? "spatial" : "density");
  line("coupling.current_shape", coupling.shape == CurrentShape::kPeakNormalized ? "peak" : "raw");

  if (!dynamics.tg.empty()) line("dynamics.tg_list", join_list(dynamics.tg, false));
  line("dynamics.truncate_below", num(dynamics.truncate_below));

  line("renorm.variant", renorm.variant == DressingVariant::kStandard ? "standard" : "literal");
  if (!renorm.g.empty()) line("renorm.g_list_ghz", join_list(renorm.g, true));
  if (!phase.delta0_ratio.empty()) line("phase.delta0_ratio_list", join_list(phase.delta0_ratio, false));

  line("disorder.sigma", num(disorder.sigma));
  line("disorder.seeds", std::to_string(disorder.seeds));
  line("disorder.seed_base", std::to_string(disorder.seed_base));
  if (disorder.band_min) line("disorder.band_min_ghz", ghz_text((*disorder.band_min)));
  if (disorder.band_max) line("disorder.band_max_ghz", ghz_text((*disorder.band_max)));

  if (!with_run) return out;
  line("output.dir", output_dir);
  if (!output_stem.empty()) line("output.stem", output_stem);
  line("run.threads", std::to_string(threads));
  return out;
}

std::string RunConfig::echo() const { return echo_text(*this, true); }

std::string RunConfig::hash() const {
  // Output location and thread count do not change results, so they stay out of the hash.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : echo_text(*this, false)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace metaline
