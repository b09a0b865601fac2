#include "metaline/metaline.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "metaline/commands.hpp"
#include "metaline/config.hpp"
#include "metaline/csv.hpp"
#include "metaline/error.hpp"
#include "metaline/modes.hpp"
#include "metaline/spinboson.hpp"

struct metaline_config {
  metaline::RunConfig config;
};

struct metaline_modes {
  metaline::ModeSet modes;
  metaline::CouplingSpectrum couplings;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_last_line = 0;

metaline_status fail(metaline_status status, const std::string& message, int line = 0) {
  g_last_error = message;
  g_last_line = line;
  return status;
}

metaline_status status_of(metaline::ErrorKind kind) {
  switch (kind) {
    case metaline::ErrorKind::kConfig: return METALINE_ERR_CONFIG;
    case metaline::ErrorKind::kNumerical: return METALINE_ERR_NUMERICAL;
    case metaline::ErrorKind::kDomain: return METALINE_ERR_DOMAIN;
    case metaline::ErrorKind::kValidation: return METALINE_ERR_VALIDATION;
    case metaline::ErrorKind::kIo: return METALINE_ERR_IO;
  }
  return METALINE_ERR_INTERNAL;
}

template <class Fn>
metaline_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    g_last_line = 0;
    return fn();
  } catch (const metaline::ConfigError& e) {
    return fail(METALINE_ERR_CONFIG, e.what(), e.line());
  } catch (const metaline::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(METALINE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(METALINE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(METALINE_ERR_INTERNAL, "unknown error");
  }
}

metaline_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return needed ? METALINE_OK : fail(METALINE_ERR_NULL_ARGUMENT, "null buffer");
  if (cap < s.size() + 1) {
    if (cap > 0) buf[0] = '\0';
    return fail(METALINE_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return METALINE_OK;
}

}  // namespace

extern "C" {

const char* metaline_version(void) { return metaline::kVersion.data(); }

const char* metaline_last_error(void) { return g_last_error.c_str(); }

int metaline_last_error_line(void) { return g_last_line; }

metaline_status metaline_config_load(const char* path, metaline_config** out) {
  if (!path || !out) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new metaline_config{metaline::load_config(path)};
    return METALINE_OK;
  });
}

metaline_status metaline_config_parse(const char* text, metaline_config** out) {
  if (!text || !out) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new metaline_config{metaline::parse_config(text)};
    return METALINE_OK;
  });
}

void metaline_config_free(metaline_config* config) { delete config; }

metaline_status metaline_config_echo(const metaline_config* config, char* buf, size_t cap,
                                     size_t* needed) {
  if (!config) return fail(METALINE_ERR_NULL_ARGUMENT, "null config");
  return guarded([&] { return copy_out(config->config.echo(), buf, cap, needed); });
}

metaline_status metaline_config_hash(const metaline_config* config, char* buf, size_t cap) {
  if (!config || !buf) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { return copy_out(config->config.hash(), buf, cap, nullptr); });
}

double metaline_config_omega_ir(const metaline_config* config) {
  return config ? config->config.circuit.omega_ir() : 0.0;
}

metaline_status metaline_run(const metaline_config* config, const char* command,
                             const metaline_run_options* options, char* summary,
                             size_t summary_cap) {
  if (!config || !command) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    metaline::CommandOptions opts;
    if (options) {
      if (options->out_dir) opts.out_dir = options->out_dir;
      if (options->threads >= 0) opts.threads = static_cast<unsigned>(options->threads);
      opts.profiles = options->profiles != 0;
    }
    const auto result = metaline::run_command(command, config->config, opts);
    if (summary && summary_cap > 0) {
      const std::size_t n = std::min(result.summary.size(), summary_cap - 1);
      std::memcpy(summary, result.summary.data(), n);
      summary[n] = '\0';
    }
    return METALINE_OK;
  });
}

metaline_status metaline_design_from_impedance(double z0, double omega_ir, double* c_left,
                                               double* l_left) {
  if (!c_left || !l_left) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto d = metaline::design_from_impedance(z0, omega_ir);
    *c_left = d.c_left;
    *l_left = d.l_left;
    return METALINE_OK;
  });
}

metaline_status metaline_modes_solve(const metaline_config* config, metaline_modes** out) {
  if (!config || !out) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* handle = new metaline_modes{};
    try {
      handle->modes = metaline::solve_modes(config->config.circuit, config->config.window());
      if (!handle->modes.empty()) {
        handle->couplings = metaline::configured_couplings(config->config, handle->modes);
      }
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
    return METALINE_OK;
  });
}

size_t metaline_modes_count(const metaline_modes* modes) { return modes ? modes->modes.size() : 0; }

metaline_status metaline_modes_frequencies(const metaline_modes* modes, double* out, size_t cap) {
  if (!modes || (!out && modes->modes.size() > 0)) {
    return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  }
  if (cap < modes->modes.size()) return fail(METALINE_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::copy(modes->modes.frequencies.begin(), modes->modes.frequencies.end(), out);
  return METALINE_OK;
}

metaline_status metaline_modes_couplings(const metaline_modes* modes, double* relative, double* g,
                                         size_t cap) {
  if (!modes) return fail(METALINE_ERR_NULL_ARGUMENT, "null modes");
  const auto& c = modes->couplings;
  if (cap < c.size()) return fail(METALINE_ERR_BUFFER_TOO_SMALL, "buffer too small");
  if (relative) std::copy(c.relative_profile.begin(), c.relative_profile.end(), relative);
  if (g) std::copy(c.g.begin(), c.g.end(), g);
  return METALINE_OK;
}

void metaline_modes_free(metaline_modes* modes) { delete modes; }

metaline_status metaline_renormalize(const double* omega, const double* g, size_t n, double delta0,
                                     int literal, double* delta_eff, double* log_ratio,
                                     int* converged) {
  if ((!omega || !g) && n > 0) return fail(METALINE_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    metaline::CouplingSpectrum c;
    c.frequencies.assign(omega, omega + n);
    c.g.assign(g, g + n);
    c.relative_profile.assign(n, 1.0);
    const auto r = metaline::renormalize(
        c, delta0,
        literal ? metaline::DressingVariant::kLiteral : metaline::DressingVariant::kStandard);
    if (delta_eff) *delta_eff = r.delta_eff;
    if (log_ratio) *log_ratio = r.log_ratio;
    if (converged) *converged = r.converged ? 1 : 0;
    return METALINE_OK;
  });
}

}  // extern "C"
