#ifndef METALINE_H
#define METALINE_H

/* C interface to the metaline library. Handles are opaque; every call that
 * can fail returns a metaline_status, and the message of the most recent
 * failure on the calling thread is available from metaline_last_error(). */

#include <stddef.h>

#if defined(METALINE_BUILDING_LIBRARY)
#define METALINE_API __attribute__((visibility("default")))
#else
#define METALINE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum metaline_status {
  METALINE_OK = 0,
  METALINE_ERR_INTERNAL = 1,
  METALINE_ERR_CONFIG = 2,
  METALINE_ERR_NUMERICAL = 3,
  METALINE_ERR_DOMAIN = 4,
  METALINE_ERR_VALIDATION = 5,
  METALINE_ERR_IO = 6,
  METALINE_ERR_NULL_ARGUMENT = 7,
  METALINE_ERR_BUFFER_TOO_SMALL = 8
} metaline_status;

typedef struct metaline_config metaline_config;
typedef struct metaline_modes metaline_modes;

typedef struct metaline_run_options {
  const char* out_dir; /* NULL: use output.dir from the config */
  int threads;         /* < 0: use run.threads; 0: all cores */
  int profiles;        /* nonzero: per-node columns in modes.csv */
} metaline_run_options;

METALINE_API const char* metaline_version(void);

/* Message of the last failed call on this thread, "" if none. */
METALINE_API const char* metaline_last_error(void);
/* Config line of the last failure, 0 when it is not tied to a line. */
METALINE_API int metaline_last_error_line(void);

METALINE_API metaline_status metaline_config_load(const char* path, metaline_config** out);
METALINE_API metaline_status metaline_config_parse(const char* text, metaline_config** out);
METALINE_API void metaline_config_free(metaline_config* config);

/* Copies a NUL-terminated string into buf. *needed (if given) receives the
 * size including the terminator; METALINE_ERR_BUFFER_TOO_SMALL if cap is short. */
METALINE_API metaline_status metaline_config_echo(const metaline_config* config, char* buf,
                                                  size_t cap, size_t* needed);
METALINE_API metaline_status metaline_config_hash(const metaline_config* config, char* buf,
                                                  size_t cap);
METALINE_API double metaline_config_omega_ir(const metaline_config* config);

/* Runs "modes", "dynamics", "renorm", "phase" or "disorder". options may be
 * NULL. summary (may be NULL) receives a one-line description. */
METALINE_API metaline_status metaline_run(const metaline_config* config, const char* command,
                                          const metaline_run_options* options, char* summary,
                                          size_t summary_cap);

METALINE_API metaline_status metaline_design_from_impedance(double z0, double omega_ir,
                                                            double* c_left, double* l_left);

/* Modes of the configured circuit inside the configured window, with the
 * configured qubit's coupling spectrum. */
METALINE_API metaline_status metaline_modes_solve(const metaline_config* config,
                                                  metaline_modes** out);
METALINE_API size_t metaline_modes_count(const metaline_modes* modes);
METALINE_API metaline_status metaline_modes_frequencies(const metaline_modes* modes, double* out,
                                                        size_t cap);
METALINE_API metaline_status metaline_modes_couplings(const metaline_modes* modes,
                                                      double* relative, double* g, size_t cap);
METALINE_API void metaline_modes_free(metaline_modes* modes);

/* Self-consistent splitting for n modes (rad/s). literal selects
 * lambda = g^2/w^2 instead of g/w. Any output pointer may be NULL. */
METALINE_API metaline_status metaline_renormalize(const double* omega, const double* g, size_t n,
                                                  double delta0, int literal, double* delta_eff,
                                                  double* log_ratio, int* converged);

#ifdef __cplusplus
}
#endif

#endif
