/* SPDX-License-Identifier: Apache-2.0 */
#ifndef BMSTAB_H
#define BMSTAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(BMS_BUILDING_LIBRARY)
#define BMS_API __attribute__((visibility("default")))
#else
#define BMS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning bms_status sets a thread-local
 * error record on failure, readable with bms_last_error_*. */
typedef int bms_status;
enum {
    BMS_OK = 0,
    BMS_ERR_INVALID_ARGUMENT = -1,
    BMS_ERR_DIMENSION_MISMATCH = -2,
    BMS_ERR_NON_POSITIVE_SUPPORT = -3,
    BMS_ERR_NOT_CONVEX = -4,
    BMS_ERR_INVALID_MEASURE = -5,
    BMS_ERR_QUADRATURE_FAILURE = -6,
    BMS_ERR_OUTSIDE_VALIDITY = -7,
    BMS_ERR_DEGENERATE_FAMILY = -8,
    BMS_ERR_UNSUPPORTED = -9,
    BMS_ERR_CONFIG = -10,
    BMS_ERR_IO = -11,
    BMS_ERR_INTERNAL = -100
};

typedef struct bms_grid bms_grid;
typedef struct bms_function bms_function;
typedef struct bms_measure bms_measure;
typedef struct bms_body bms_body;
typedef struct bms_config bms_config;

typedef double (*bms_radial_fn)(double r, void* user);
typedef void (*bms_line_fn)(const char* line, void* user);

BMS_API const char* bms_version(void);
BMS_API const char* bms_status_string(bms_status s);
BMS_API const char* bms_last_error_message(void);
/* Offending grid node, or -1. */
BMS_API ptrdiff_t bms_last_error_node(void);
/* Offending radius for measure errors, NaN otherwise. */
BMS_API double bms_last_error_value(void);

/* Grids */
BMS_API bms_status bms_grid_create(int n, int resolution, bms_grid** out);
BMS_API void bms_grid_destroy(bms_grid* g);
BMS_API size_t bms_grid_size(const bms_grid* g);
BMS_API int bms_grid_max_resolution(int n);
BMS_API bms_status bms_grid_integrate(const bms_grid* g, const bms_function* f, double* out);

/* Spherical functions */
BMS_API bms_status bms_function_constant(int n, double c, bms_function** out);
BMS_API bms_status bms_function_coordinate(int n, int k, bms_function** out);
/* count monomials; powers is row-major count x n. */
BMS_API bms_status bms_function_polynomial(int n, size_t count, const double* coefs, const int* powers,
                                           bms_function** out);
/* n = 2: sum_k a_k cos(k t) + b_k sin(k t). */
BMS_API bms_status bms_function_trig(size_t ncos, const double* cos_coef, size_t nsin, const double* sin_coef,
                                     bms_function** out);
BMS_API bms_status bms_function_add(const bms_function* a, const bms_function* b, bms_function** out);
BMS_API bms_status bms_function_mul(const bms_function* a, const bms_function* b, bms_function** out);
BMS_API bms_status bms_function_scale(const bms_function* a, double s, bms_function** out);
BMS_API bms_status bms_function_exp(const bms_function* a, bms_function** out);
BMS_API void bms_function_destroy(bms_function* f);
/* u must hold n coordinates of a unit vector. */
BMS_API bms_status bms_function_eval(const bms_function* f, const double* u, double* out);
BMS_API bms_status bms_poincare_ratio(const bms_function* f, const bms_grid* g, double* out);

/* Measures */
BMS_API bms_status bms_measure_gaussian(bms_measure** out);
BMS_API bms_status bms_measure_exp_power(double p, bms_measure** out);
BMS_API bms_status bms_measure_lebesgue(bms_measure** out);
/* Validated on creation unless validate == 0. user must outlive the handle. */
BMS_API bms_status bms_measure_custom(bms_radial_fn f, bms_radial_fn df, bms_radial_fn d2f, void* user,
                                      const char* label, int validate, bms_measure** out);
BMS_API void bms_measure_destroy(bms_measure* m);
BMS_API bms_status bms_measure_density(const bms_measure* m, double r, double* out);
/* out[0..2] = A, B, C at radius D. */
BMS_API bms_status bms_measure_moments(const bms_measure* m, double D, int n, double out[3]);
BMS_API bms_status bms_measure_identity_residuals(const bms_measure* m, double R, int n, double* r1, double* r2);

/* Bodies */
BMS_API bms_status bms_body_create(const bms_function* h, const bms_grid* g, bms_body** out);
BMS_API void bms_body_destroy(bms_body* b);
BMS_API bms_status bms_body_measure(const bms_body* b, const bms_measure* m, double* out);
/* Writes V_0..V_n into out (capacity >= n + 1). */
BMS_API bms_status bms_body_quermassintegrals(const bms_body* b, double* out, size_t capacity);
BMS_API bms_status bms_body_min_eigenvalue(const bms_body* b, double* out);
BMS_API bms_status bms_mc_measure(const bms_measure* m, const bms_body* b, uint64_t samples, uint64_t seed,
                                  double* value, double* standard_error);

/* Batch runner */
BMS_API bms_status bms_config_load(const char* path, bms_config** out);
BMS_API bms_status bms_config_parse(const char* json_text, bms_config** out);
BMS_API void bms_config_destroy(bms_config* c);
/* Serialized config; valid until the next call on this thread. */
BMS_API const char* bms_config_to_json(const bms_config* c);
/* out_dir may be NULL to use the configured directory. exit_code gets 0 or 2. */
BMS_API bms_status bms_run(const bms_config* c, const char* out_dir, int svg, bms_line_fn log, void* user,
                           int* exit_code);
BMS_API bms_status bms_verify_identities(int n, int resolution, int sweep, const bms_measure* const* extra,
                                         size_t extra_count, bms_line_fn log, void* user, int* exit_code);
BMS_API bms_status bms_demo_shift(double t, double lambda, bms_line_fn log, void* user, int* exit_code);

BMS_API size_t bms_check_count(void);
BMS_API const char* bms_check_name(size_t i);
BMS_API const char* bms_check_description(size_t i);

#ifdef __cplusplus
}
#endif

#endif
