/*
 * Copyright 2026 The pvlab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the pvlab Poisson-functional toolkit.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a pvlab_status;
 * on failure pvlab_last_error() returns a message for the calling thread.
 * Strings are returned through (buffer, capacity, required) triples: the
 * call always sets *required to the full length including the terminator
 * and writes a truncated, terminated copy when capacity is too small.
 */
#ifndef PVLAB_PVLAB_H
#define PVLAB_PVLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#    if defined(PVLAB_BUILDING_LIBRARY)
#        define PVLAB_API __declspec(dllexport)
#    else
#        define PVLAB_API __declspec(dllimport)
#    endif
#else
#    define PVLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pvlab_status
{
    PVLAB_OK = 0,
    PVLAB_ERROR_INVALID_ARGUMENT = 1,
    PVLAB_ERROR_DIMENSION_MISMATCH = 2,
    PVLAB_ERROR_DEGENERATE = 3,
    PVLAB_ERROR_NUMERIC = 4,
    PVLAB_ERROR_CONFIG = 5,
    PVLAB_ERROR_IO = 6,
    PVLAB_ERROR_NOT_FOUND = 7,
    PVLAB_ERROR_INTERNAL = 99
} pvlab_status;

typedef struct pvlab_points pvlab_points;
typedef struct pvlab_window pvlab_window;
typedef struct pvlab_model pvlab_model;
typedef struct pvlab_hull pvlab_hull;

typedef struct pvlab_seed
{
    uint64_t master_seed;
    uint64_t experiment;
    uint64_t replication;
} pvlab_seed;

typedef struct pvlab_estimate
{
    double estimate;
    double std_error;
    uint64_t n_reps;
    double ci_level;
    double ci_lo;
    double ci_hi;
} pvlab_estimate;

typedef struct pvlab_dirichlet
{
    pvlab_estimate first_order;
    pvlab_estimate second_order;
    double alpha_hat; /* +inf when first_order.estimate == 0 */
    double lower_bound; /* 4/(alpha_hat+2)^2 * first order */
    double lower_bound_std_error;
    double upper_bound; /* first order */
} pvlab_dirichlet;

typedef void (*pvlab_log_fn)(const char* line, void* user);

PVLAB_API const char* pvlab_version(void);
PVLAB_API const char* pvlab_last_error(void);
PVLAB_API const char* pvlab_status_string(pvlab_status status);

/* Worker threads for replication loops; 0 restores the default. */
PVLAB_API void pvlab_set_thread_count(size_t n);

/* Point configurations ---------------------------------------------------*/

PVLAB_API pvlab_status pvlab_points_create(size_t dim, pvlab_points** out);
PVLAB_API void pvlab_points_destroy(pvlab_points* points);
PVLAB_API size_t pvlab_points_dim(const pvlab_points* points);
PVLAB_API size_t pvlab_points_size(const pvlab_points* points);
PVLAB_API pvlab_status pvlab_points_append(pvlab_points* points,
                                           const double* x, size_t dim);
PVLAB_API pvlab_status pvlab_points_get(const pvlab_points* points,
                                        size_t index, double* out,
                                        size_t dim);
PVLAB_API pvlab_status pvlab_points_read_csv(const char* path,
                                             pvlab_points** out);
PVLAB_API pvlab_status pvlab_points_write_csv(const pvlab_points* points,
                                              const char* path);

/* Windows and sampling ---------------------------------------------------*/

PVLAB_API pvlab_status pvlab_window_create_box(size_t dim, const double* lo,
                                               const double* hi,
                                               pvlab_window** out);
PVLAB_API pvlab_status pvlab_window_create_ball(size_t dim,
                                                const double* center,
                                                double radius,
                                                pvlab_window** out);
PVLAB_API void pvlab_window_destroy(pvlab_window* window);
PVLAB_API double pvlab_window_volume(const pvlab_window* window);
PVLAB_API int pvlab_window_contains(const pvlab_window* window,
                                    const double* x, size_t dim);

PVLAB_API pvlab_status pvlab_ball_volume(size_t dim, double radius,
                                         double* out);
PVLAB_API pvlab_status pvlab_sample_poisson(const pvlab_window* window,
                                            double intensity, pvlab_seed seed,
                                            pvlab_points** out);

/* Functionals from the built-in catalogue --------------------------------*/

/* params_json may be NULL or "" for defaults. For the shot-noise entry s is
 * the observation radius; otherwise it is the intensity. */
PVLAB_API pvlab_status pvlab_model_create(const char* name,
                                          const char* params_json, double s,
                                          pvlab_model** out);
PVLAB_API void pvlab_model_destroy(pvlab_model* model);
PVLAB_API const char* pvlab_model_label(const pvlab_model* model);
PVLAB_API double pvlab_model_intensity(const pvlab_model* model);
/* Borrowed handle valid for the lifetime of the model. */
PVLAB_API const pvlab_window* pvlab_model_window(const pvlab_model* model);

PVLAB_API pvlab_status pvlab_model_evaluate(const pvlab_model* model,
                                            const pvlab_points* points,
                                            double* out);
PVLAB_API pvlab_status pvlab_model_difference(const pvlab_model* model,
                                              const pvlab_points* points,
                                              const double* x, size_t dim,
                                              double* out);
PVLAB_API pvlab_status pvlab_model_second_difference(
    const pvlab_model* model, const pvlab_points* points, const double* x,
    const double* y, size_t dim, double* out);

PVLAB_API pvlab_status pvlab_estimate_variance(const pvlab_model* model,
                                               uint64_t n_reps,
                                               pvlab_seed seed,
                                               pvlab_estimate* out);
PVLAB_API pvlab_status pvlab_estimate_dirichlet(const pvlab_model* model,
                                                uint64_t n_reps,
                                                pvlab_seed seed,
                                                pvlab_dirichlet* out);
PVLAB_API pvlab_status pvlab_first_chaos_bound(const pvlab_model* model,
                                               uint64_t n_reps,
                                               uint64_t inner_count,
                                               pvlab_seed seed,
                                               pvlab_estimate* out);

/* Convex hulls ----------------------------------------------------------*/

PVLAB_API pvlab_status pvlab_hull_compute(const pvlab_points* points,
                                          pvlab_hull** out);
PVLAB_API void pvlab_hull_destroy(pvlab_hull* hull);
PVLAB_API size_t pvlab_hull_facet_count(const pvlab_hull* hull);
PVLAB_API size_t pvlab_hull_vertex_count(const pvlab_hull* hull);
PVLAB_API pvlab_status pvlab_hull_lp_area(const pvlab_hull* hull, double p,
                                          double* out);
PVLAB_API pvlab_status pvlab_hull_to_json(const pvlab_hull* hull,
                                          char* buffer, size_t capacity,
                                          size_t* required);

/* Experiments -----------------------------------------------------------*/

/* Catalogue of registered functionals as text. */
PVLAB_API pvlab_status pvlab_list_functionals(char* buffer, size_t capacity,
                                              size_t* required);

/* Runs a JSON experiment config and writes its outputs. *exit_code gets
 * 0 (pass), 1 (assertion failed) or 2 (usage/config error); the return
 * value is PVLAB_OK unless the run itself could not be attempted. */
PVLAB_API pvlab_status pvlab_run_experiment(const char* config_path,
                                            int override_seed, uint64_t seed,
                                            pvlab_log_fn log, void* user,
                                            int* exit_code);

PVLAB_API pvlab_status pvlab_selftest(pvlab_log_fn log, void* user,
                                      int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* PVLAB_PVLAB_H */
