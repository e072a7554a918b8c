#ifndef Z2AMP_Z2AMP_H
#define Z2AMP_Z2AMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(Z2AMP_BUILDING_LIBRARY)
#define Z2AMP_API __attribute__((visibility("default")))
#else
#define Z2AMP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum z2amp_status {
  Z2AMP_OK = 0,
  Z2AMP_INVALID_ARGUMENT = 1,
  Z2AMP_DIMENSION_MISMATCH = 2,
  Z2AMP_DEGENERATE_INPUT = 3,
  Z2AMP_OUT_OF_MEMORY = 4,
  Z2AMP_IO_ERROR = 5,
  Z2AMP_NO_CROSSING = 6,
  Z2AMP_INTERNAL = 7
} z2amp_status;

typedef enum z2amp_backend { Z2AMP_BACKEND_DENSE = 0, Z2AMP_BACKEND_STREAMED = 1 } z2amp_backend;
typedef enum z2amp_init { Z2AMP_INIT_RANDOM = 0, Z2AMP_INIT_SPECTRAL = 1 } z2amp_init;
typedef enum z2amp_format { Z2AMP_FORMAT_CSV = 0, Z2AMP_FORMAT_JSON = 1 } z2amp_format;

typedef struct z2amp_model z2amp_model;
typedef struct z2amp_trajectory z2amp_trajectory;
typedef struct z2amp_config z2amp_config;
typedef struct z2amp_result z2amp_result;

typedef struct z2amp_record {
  int t;
  double pi;
  double gamma;
  double onsager;
  double alpha_oracle; /* alpha_{t+1} */
  double alpha_plugin;
  double correlation;
} z2amp_record;

typedef struct z2amp_run_summary {
  int init; /* z2amp_init */
  int run;
  uint64_t model_seed;
  int crossing; /* -1 when the threshold was never reached */
  double plateau_correlation;
  double empirical_risk; /* NaN unless iterates were stored */
} z2amp_run_summary;

/* Stable lower-case category name, e.g. "invalid_argument". */
Z2AMP_API const char* z2amp_status_name(z2amp_status status);
/* Message of the last failing call on this thread; "" if none. */
Z2AMP_API const char* z2amp_last_error(void);
/* Newline-separated paths written by the last emitting call on this thread. */
Z2AMP_API const char* z2amp_last_outputs(void);

/* Model */
Z2AMP_API z2amp_status z2amp_model_create(size_t n, double lambda, uint64_t seed,
                                          z2amp_backend backend, z2amp_model** out);
Z2AMP_API void z2amp_model_destroy(z2amp_model* model);
Z2AMP_API size_t z2amp_model_dim(const z2amp_model* model);
Z2AMP_API z2amp_status z2amp_model_signal(const z2amp_model* model, double* out, size_t len);
Z2AMP_API z2amp_status z2amp_model_matvec(const z2amp_model* model, const double* y, double* out,
                                          size_t len);

/* Single AMP run */
Z2AMP_API z2amp_status z2amp_run(const z2amp_model* model, z2amp_init init, uint64_t init_seed,
                                 int t_max, int store_iterates, z2amp_trajectory** out);
Z2AMP_API void z2amp_trajectory_destroy(z2amp_trajectory* trajectory);
Z2AMP_API size_t z2amp_trajectory_length(const z2amp_trajectory* trajectory);
Z2AMP_API z2amp_status z2amp_trajectory_record(const z2amp_trajectory* trajectory, size_t index,
                                               z2amp_record* out);
/* x_t for t = index + 1; requires store_iterates. */
Z2AMP_API z2amp_status z2amp_trajectory_iterate(const z2amp_trajectory* trajectory, size_t index,
                                                double* out, size_t len);
/* Z2AMP_NO_CROSSING when the oracle alpha never reaches the threshold. */
Z2AMP_API z2amp_status z2amp_trajectory_crossing(const z2amp_trajectory* trajectory,
                                                 const z2amp_model* model, int* t);
Z2AMP_API z2amp_status z2amp_trajectory_risk(const z2amp_trajectory* trajectory,
                                             const z2amp_model* model, int t, double* empirical,
                                             double* predicted);

/* State evolution */
Z2AMP_API z2amp_status z2amp_h(double tau, double* out);
Z2AMP_API z2amp_status z2amp_h_prime(double tau, double* out);
Z2AMP_API z2amp_status z2amp_fixed_point(double lambda, double* alpha, int* sub_resolution);
Z2AMP_API z2amp_status z2amp_asymptotic_risk(double lambda, double* out);

/* Experiment configuration */
Z2AMP_API z2amp_status z2amp_config_create(z2amp_config** out);
Z2AMP_API void z2amp_config_destroy(z2amp_config* config);
Z2AMP_API z2amp_status z2amp_config_set(z2amp_config* config, const char* key, const char* value);
Z2AMP_API z2amp_status z2amp_config_load_file(z2amp_config* config, const char* path);
/* Current value of a key as text. Writes at most cap bytes including the
   terminator; *needed (optional) receives the full length plus one. */
Z2AMP_API z2amp_status z2amp_config_get(const z2amp_config* config, const char* key, char* buf,
                                        size_t cap, size_t* needed);
Z2AMP_API z2amp_status z2amp_config_validate(const z2amp_config* config);

/* Presets */
Z2AMP_API size_t z2amp_preset_count(void);
Z2AMP_API const char* z2amp_preset_name(size_t index);
/* Writes up to cap lambdas; *count receives the preset's lambda count. */
Z2AMP_API z2amp_status z2amp_preset_info(const char* name, int* long_running, double* lambdas,
                                         size_t cap, size_t* count);

/* Experiments */
Z2AMP_API z2amp_status z2amp_simulate(const z2amp_config* config, z2amp_result** out);
Z2AMP_API void z2amp_result_destroy(z2amp_result* result);
Z2AMP_API double z2amp_result_alpha_star(const z2amp_result* result);
Z2AMP_API double z2amp_result_predicted_risk(const z2amp_result* result);
Z2AMP_API size_t z2amp_result_run_count(const z2amp_result* result);
Z2AMP_API z2amp_status z2amp_result_run(const z2amp_result* result, size_t index,
                                        z2amp_run_summary* out);
/* Uses the config's format and output prefix unless prefix is non-null. */
Z2AMP_API z2amp_status z2amp_result_emit(const z2amp_result* result, const char* prefix);

Z2AMP_API z2amp_status z2amp_sweep(const z2amp_config* config, const char* prefix);
Z2AMP_API z2amp_status z2amp_diagnose(const z2amp_config* config, const char* prefix);
Z2AMP_API z2amp_status z2amp_se_table(const double* lambdas, size_t count, z2amp_format format,
                                      const char* prefix);

#ifdef __cplusplus
}
#endif

#endif
