/*
 * cem.h - C interface to the cross-entropy optimization toolkit.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Every fallible call returns a cem_status; on failure a human-readable
 * message is available from cem_last_error() on the calling thread until
 * the next failing call on that thread.
 */
#ifndef CEM_CEM_H
#define CEM_CEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CEM_BUILDING_LIBRARY)
#    define CEM_API __declspec(dllexport)
#  else
#    define CEM_API __declspec(dllimport)
#  endif
#else
#  define CEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cem_status {
  CEM_OK = 0,
  CEM_ERR_ARGUMENT = 1,  /* bad argument (null pointer, empty input, ...) */
  CEM_ERR_DIMENSION = 2, /* vector length does not match the problem */
  CEM_ERR_DOMAIN = 3,    /* value outside a function's mathematical domain */
  CEM_ERR_CAPACITY = 4,  /* refused: input too large (e.g. enumeration) */
  CEM_ERR_CONFIG = 5,    /* invalid configuration; message names the field */
  CEM_ERR_IO = 6,        /* file could not be read or written */
  CEM_ERR_RUNTIME = 7    /* anything else */
} cem_status;

typedef enum cem_format { CEM_FORMAT_CSV = 0, CEM_FORMAT_JSON = 1 } cem_format;

typedef enum cem_variant {
  CEM_VARIANT_BATCH = 0,
  CEM_VARIANT_WINDOW = 1,
  CEM_VARIANT_MEMORYLESS = 2
} cem_variant;

typedef struct cem_config cem_config;
typedef struct cem_objective cem_objective;
typedef struct cem_run cem_run;
typedef struct cem_text cem_text;

CEM_API const char* cem_version(void);
CEM_API const char* cem_status_name(cem_status status);
CEM_API const char* cem_last_error(void);

/* ---- text buffers returned by the library ---- */
CEM_API const char* cem_text_data(const cem_text* text);
CEM_API size_t cem_text_size(const cem_text* text);
CEM_API cem_status cem_text_write(const cem_text* text, const char* path);
CEM_API void cem_text_free(cem_text* text);

/* ---- experiment configuration (JSON) ---- */
CEM_API cem_status cem_config_default(cem_config** out);
CEM_API cem_status cem_config_parse(const char* json_text, cem_config** out);
CEM_API cem_status cem_config_load(const char* path, cem_config** out);
CEM_API void cem_config_free(cem_config* config);
CEM_API cem_status cem_config_set_seed(cem_config* config, uint64_t base_seed);
CEM_API cem_status cem_config_set_jobs(cem_config* config, unsigned jobs);
CEM_API cem_status cem_config_set_format(cem_config* config, cem_format format);
CEM_API cem_status cem_config_set_output(cem_config* config, const char* path);
CEM_API cem_status cem_config_set_timing(cem_config* config, int enabled);
CEM_API cem_format cem_config_format(const cem_config* config);
/* Empty string when no output path is configured. Owned by the config. */
CEM_API const char* cem_config_output(const cem_config* config);
/* Effective configuration with all defaults, as JSON. */
CEM_API cem_status cem_config_dump(const cem_config* config, cem_text** out);

/* ---- harness operations; results rendered in the config's format ---- */
/* One row per replicate. *failed receives the number of replicates that
 * raised an error (their rows carry the message). */
CEM_API cem_status cem_run_experiment(const cem_config* config, cem_text** out, size_t* failed);
CEM_API cem_status cem_sweep_alpha(const cem_config* config, cem_text** out);
CEM_API cem_status cem_compare_variants(const cem_config* config, cem_text** out);
CEM_API cem_status cem_calibrate_delta0(const cem_config* config, cem_text** out);

/* ---- objectives ---- */
/* Builds the objective described by the config's "problem" block. */
CEM_API cem_status cem_objective_create(const cem_config* config, cem_objective** out);
CEM_API void cem_objective_free(cem_objective* objective);
CEM_API size_t cem_objective_dimension(const cem_objective* objective);
CEM_API cem_status cem_objective_evaluate(const cem_objective* objective, const uint8_t* bits,
                                          size_t n, double* value);
/* Stored optimum; CEM_ERR_ARGUMENT when the problem carries none. */
CEM_API cem_status cem_objective_optimum(const cem_objective* objective, uint8_t* bits, size_t n,
                                         double* value);
/* Exhaustive search; CEM_ERR_CAPACITY for n > 24. */
CEM_API cem_status cem_objective_enumerate(const cem_objective* objective, uint8_t* bits,
                                           size_t n, double* value);

/* ---- single runs ---- */
CEM_API cem_status cem_run_single(const cem_config* config, cem_variant variant, uint64_t seed,
                                  cem_run** out);
CEM_API void cem_run_free(cem_run* run);
CEM_API uint64_t cem_run_steps(const cem_run* run);
CEM_API uint64_t cem_run_updates(const cem_run* run);
CEM_API double cem_run_best_value(const cem_run* run);
CEM_API cem_status cem_run_final_params(const cem_run* run, double* probs, size_t n);
/* Convergence report as a JSON object. */
CEM_API cem_status cem_run_report(const cem_run* run, cem_text** out);

/* ---- closed-form quantities ---- */
CEM_API cem_status cem_normal_quantile(double p, double* out);
CEM_API cem_status cem_delta0_uniform(size_t population, double* out);
CEM_API cem_status cem_delta0_gauss(size_t population, double rho, double* out);
CEM_API cem_status cem_miss_probability_bound(double phi1, double alpha1, size_t n, double* out);
CEM_API cem_status cem_phi(const double* probs, const uint8_t* x_star, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CEM_CEM_H */
