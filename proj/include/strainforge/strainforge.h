/* strainforge C API.
 *
 * All functions return an sf_status; on failure a one-line message is
 * available from sf_last_error() on the calling thread until the next call.
 * Handles are opaque and owned by the caller; destroy them with the matching
 * *_destroy function. A context may be used from one thread at a time;
 * distinct contexts are independent.
 */
#ifndef STRAINFORGE_H
#define STRAINFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef STRAINFORGE_BUILDING
#    define SF_API __declspec(dllexport)
#  else
#    define SF_API __declspec(dllimport)
#  endif
#else
#  define SF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_INVALID_ARGUMENT = 1,
  SF_ERR_INVALID_ROTATION = 2,
  SF_ERR_FRAME_MISMATCH = 3,
  SF_ERR_INVALID_GEOMETRY = 4,
  SF_ERR_OUT_OF_DOMAIN = 5,
  SF_ERR_EMPTY_REQUEST = 6,
  SF_ERR_DEGENERATE_GEOMETRY = 7,
  SF_ERR_INFEASIBLE = 8,
  SF_ERR_INVALID_DOMAIN = 9,
  SF_ERR_PARSE = 10,
  SF_ERR_DUPLICATE_ABSCISSA = 11,
  SF_ERR_INVALID_PARAMETER = 12,
  SF_ERR_NO_SINGLE_EMITTERS = 13,
  SF_ERR_CONFIG = 14,
  SF_ERR_IO = 15,
  SF_ERR_INTERNAL = 99
} sf_status;

typedef enum sf_frame { SF_FRAME_CRYSTAL = 0, SF_FRAME_BEAM = 1, SF_FRAME_DEFECT = 2 } sf_frame;
typedef enum sf_phase { SF_PHASE_PRE = 0, SF_PHASE_POST = 1 } sf_phase;
typedef enum sf_calibration { SF_CALIBRATE_SIGMA = 0, SF_CALIBRATE_STRESS = 1 } sf_calibration;

typedef struct sf_context sf_context;
typedef struct sf_ensemble sf_ensemble;

typedef struct sf_summary {
  size_t n;
  double mean_ghz;
  double std_ghz;
  double sem_ghz;
} sf_summary;

SF_API const char* sf_version(void);
SF_API const char* sf_status_name(sf_status status);
SF_API const char* sf_last_error(void);

/* config_path NULL: fall back to $STRAINFORGE_CONFIG, then built-in defaults. */
SF_API sf_status sf_context_create(const char* config_path, sf_context** out);
SF_API sf_status sf_context_create_from_json(const char* json_text, sf_context** out);
SF_API void sf_context_destroy(sf_context* ctx);

/* 0 selects the machine's hardware concurrency. Never changes results. */
SF_API sf_status sf_context_set_threads(sf_context* ctx, unsigned threads);
SF_API sf_status sf_context_default_seed(const sf_context* ctx, uint64_t* out);
SF_API sf_status sf_context_default_n(const sf_context* ctx, size_t* out);
SF_API size_t sf_context_warning_count(const sf_context* ctx);
/* Borrowed string valid for the lifetime of ctx; NULL if index is out of range. */
SF_API const char* sf_context_warning(const sf_context* ctx, size_t index);

/* strain: xx, yy, zz, xy, yz, zx (tensor shear) in SF_FRAME_CRYSTAL or
 * SF_FRAME_DEFECT; orientation_id in [0, 4) is ignored for defect input. */
SF_API sf_status sf_ground_state_splitting(const sf_context* ctx, const double strain[6], sf_frame frame,
                                           int orientation_id, double* out_ghz);
SF_API sf_status sf_gamma_up_relative(const sf_context* ctx, double gss_ghz, double temp_k, double* out);
SF_API sf_status sf_operational_temperature(const sf_context* ctx, double gss_ghz, double* out_k);

/* CSV depth_nm,eps_xx,eps_yy,eps_zz; out_path NULL writes to stdout.
 * film_stress_mpa NaN uses the configured stress. */
SF_API sf_status sf_mechanics_depth_profile(const sf_context* ctx, double film_stress_mpa, double step_nm,
                                            const char* out_path);

/* override: sigma (pre) or film stress in MPa (post); NaN uses the config. */
SF_API sf_status sf_sample(const sf_context* ctx, sf_phase phase, size_t n, uint64_t seed, double override_value,
                           sf_ensemble** out);
SF_API void sf_ensemble_destroy(sf_ensemble* ensemble);
SF_API size_t sf_ensemble_size(const sf_ensemble* ensemble);
SF_API sf_status sf_ensemble_summary(const sf_ensemble* ensemble, sf_summary* out);
/* Copies min(capacity, size) splittings into out. */
SF_API sf_status sf_ensemble_gss(const sf_ensemble* ensemble, double* out, size_t capacity);
SF_API sf_status sf_ensemble_write_csv(const sf_ensemble* ensemble, const char* path);
/* Caller frees *out_json with sf_string_free. */
SF_API sf_status sf_ensemble_summary_json(const sf_ensemble* ensemble, char** out_json);

SF_API sf_status sf_calibrate(const sf_context* ctx, sf_calibration what, double target_mean_ghz, size_t n,
                              uint64_t seed, double* out);

/* n == 0 uses the configured sample count. */
SF_API sf_status sf_report(const sf_context* ctx, uint64_t seed, size_t n, const char* out_dir);

SF_API sf_status sf_spectra_analyze(const sf_context* ctx, const char* dir, const char* batch_tag,
                                    const char* out_json_path, const char* histogram_csv_path);

SF_API void sf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STRAINFORGE_H */
