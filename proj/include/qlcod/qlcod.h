#ifndef QLCOD_H
#define QLCOD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QLCOD_BUILDING)
#    define QLCOD_API __declspec(dllexport)
#  else
#    define QLCOD_API __declspec(dllimport)
#  endif
#else
#  define QLCOD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlcod_status {
  QLCOD_OK = 0,
  QLCOD_ERR_INVALID_ARGUMENT = 1,
  QLCOD_ERR_CONFIG = 2,
  QLCOD_ERR_NOT_HERMITIAN = 3,
  QLCOD_ERR_SINGULAR = 4,
  QLCOD_ERR_DIMENSION_LIMIT = 5,
  QLCOD_ERR_STABILITY_BOUND = 6,
  QLCOD_ERR_REGIME_VIOLATION = 7,
  QLCOD_ERR_DIVERGENCE = 8,
  QLCOD_ERR_IO = 9,
  QLCOD_ERR_COMPUTATION = 10,
  QLCOD_ERR_INTERNAL = 99
} qlcod_status;

/* Model constants. */
typedef struct qlcod_params {
  double omega;
  double k1;
  double k2;
  double kerr;
  double epsilon;
} qlcod_params;

typedef struct qlcod_grid {
  double x_min, x_max, y_min, y_max;
  int n_x, n_y;
} qlcod_grid;

typedef enum qlcod_lobe_class {
  QLCOD_LOBE_OSCILLATORY_RING = 0,
  QLCOD_LOBE_BIMODAL_QOD = 1,
  QLCOD_LOBE_UNIMODAL = 2
} qlcod_lobe_class;

typedef struct qlcod_lobe_report {
  qlcod_lobe_class classification;
  double delta_y;
  double euclidean_distance;
  double ring_contrast;
  size_t n_maxima;
} qlcod_lobe_report;

typedef enum qlcod_attractor_kind {
  QLCOD_LIMIT_CYCLE = 0,
  QLCOD_STEADY_STATE = 1,
  QLCOD_DIVERGENT = 2
} qlcod_attractor_kind;

typedef struct qlcod_attractor {
  qlcod_attractor_kind kind;
  double amplitude;
  double mean_r1_sq;
  double state[4];
} qlcod_attractor;

typedef struct qlcod_sde_config {
  double dt;
  uint64_t n_steps;
  uint32_t n_trajectories;
  double transient_fraction;
  uint64_t base_seed;
  double noise_scale;
  int euler_maruyama; /* nonzero: plain Euler-Maruyama; zero: RK4 drift with Euler noise */
  double initial[4];
} qlcod_sde_config;

typedef struct qlcod_run_summary {
  size_t points;
  size_t failed;
} qlcod_run_summary;

/* Opaque handles. */
typedef struct qlcod_steady_state_s* qlcod_steady_state;
typedef struct qlcod_config_s* qlcod_config;

QLCOD_API const char* qlcod_version(void);
QLCOD_API const char* qlcod_status_string(qlcod_status status);
/* Message of the last failed call on this thread; empty after a success. */
QLCOD_API const char* qlcod_last_error(void);

QLCOD_API qlcod_params qlcod_default_params(void);
QLCOD_API qlcod_grid qlcod_default_grid(const qlcod_params* params);
QLCOD_API qlcod_status qlcod_default_sde_config(const qlcod_params* params, qlcod_sde_config* out);

/* Quantum steady state on an n_max-level truncation per site. */
QLCOD_API qlcod_status qlcod_steady_state_solve(const qlcod_params* params, int n_max, qlcod_steady_state* out);
QLCOD_API void qlcod_steady_state_free(qlcod_steady_state state);
QLCOD_API qlcod_status qlcod_steady_state_n_max(qlcod_steady_state state, int* out);
QLCOD_API qlcod_status qlcod_steady_state_residual(qlcod_steady_state state, double* out);
QLCOD_API qlcod_status qlcod_mean_phonon(qlcod_steady_state state, int site, double* out);
QLCOD_API qlcod_status qlcod_negativity(qlcod_steady_state state, double* out);
QLCOD_API qlcod_status qlcod_renyi2(qlcod_steady_state state, double* out);
/* Writes n_max probabilities for `site`; `len` must be at least n_max. */
QLCOD_API qlcod_status qlcod_fock_distribution(qlcod_steady_state state, int site, double* out, size_t len);
/* Site-1 Wigner function, row-major n_y x n_x; `len` must be at least n_x * n_y. */
QLCOD_API qlcod_status qlcod_wigner(qlcod_steady_state state, const qlcod_grid* grid, double* out, size_t len);
QLCOD_API qlcod_status qlcod_lobe_report_get(qlcod_steady_state state, const qlcod_grid* grid,
                                             qlcod_lobe_report* out);

/* Classical model. */
QLCOD_API qlcod_status qlcod_classical_rhs(const qlcod_params* params, const double state[4], double out[4]);
QLCOD_API qlcod_status qlcod_pitchfork_epsilon(const qlcod_params* params, double* out);
/* Writes up to `capacity` IHSS states (4 doubles each) and their number to *count. */
QLCOD_API qlcod_status qlcod_ihss_branch(const qlcod_params* params, double* states, size_t capacity,
                                         size_t* count);
QLCOD_API qlcod_status qlcod_classify_attractor(const qlcod_params* params, const double initial[4],
                                                qlcod_attractor* out);

/* Noisy classical model. */
QLCOD_API qlcod_status qlcod_ensemble_amplitude(const qlcod_params* params, const qlcod_sde_config* config,
                                                unsigned threads, double* mean, double* std_err);

/* Batch runs driven by a JSON configuration. */
QLCOD_API qlcod_status qlcod_config_parse(const char* json_text, qlcod_config* out);
/* As qlcod_config_parse, but `mode` fills in a missing "mode" key and must match a present one. */
QLCOD_API qlcod_status qlcod_config_parse_for_mode(const char* json_text, const char* mode, qlcod_config* out);
QLCOD_API void qlcod_config_free(qlcod_config config);
QLCOD_API qlcod_status qlcod_config_set_seed(qlcod_config config, uint64_t seed);
QLCOD_API qlcod_status qlcod_config_set_threads(qlcod_config config, unsigned threads);
QLCOD_API qlcod_status qlcod_config_set_output(qlcod_config config, const char* path);
/* Mode name; valid while the handle lives. */
QLCOD_API const char* qlcod_config_mode(qlcod_config config);
/* Canonical JSON; valid until the next call on this handle. */
QLCOD_API const char* qlcod_config_canonical(qlcod_config config);
/* Writes the CSV artifact to the configured output path; empty or "-" means stdout. */
QLCOD_API qlcod_status qlcod_run(qlcod_config config, qlcod_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* QLCOD_H */
