#ifndef OSTROVSKY_H
#define OSTROVSKY_H

#include <stddef.h>
#include <stdint.h>

#if defined(OSTRO_BUILDING_LIBRARY)
#define OST_API __attribute__((visibility("default")))
#else
#define OST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ost_status {
  OST_OK = 0,
  OST_ERR_INVALID_ARGUMENT = 1,
  OST_ERR_PRECONDITION = 2,
  OST_ERR_CONVERGENCE = 3,
  OST_ERR_QUADRATURE = 4,
  OST_ERR_CONFIG = 5,
  OST_ERR_IO = 6,
  OST_INCONCLUSIVE = 7,
  OST_ERR_INTERNAL = 8
} ost_status;

typedef struct ost_grid ost_grid;
typedef struct ost_field ost_field;
typedef struct ost_trajectory ost_trajectory;
typedef struct ost_config ost_config;

/* Library version, e.g. "0.3.0". */
OST_API const char* ost_version(void);
/* Message of the last failed call on this thread; "" if none. */
OST_API const char* ost_last_error(void);
OST_API const char* ost_status_string(ost_status status);

/* Periodic grid of n_points (even, >= 8) on [-half_length, half_length). */
OST_API ost_status ost_grid_create(int n_points, double half_length, ost_grid** out);
OST_API void ost_grid_free(ost_grid* grid);
OST_API int ost_grid_size(const ost_grid* grid);

/* Field from n grid samples; the samples must have zero mean for the solvers. */
OST_API ost_status ost_field_from_samples(const ost_grid* grid, const double* values, size_t n, ost_field** out);
/* Datum family "gaussian-derivative", "sech-derivative" or "random-band-limited". */
OST_API ost_status ost_field_datum(const ost_grid* grid, const char* family, double amplitude, double width,
                                   uint64_t seed, ost_field** out);
OST_API void ost_field_free(ost_field* field);
OST_API ost_status ost_field_samples(const ost_field* field, double* out, size_t n);
OST_API ost_status ost_field_l2_norm(const ost_field* field, double* out);
OST_API ost_status ost_field_hs_norm(const ost_field* field, double s, double* out);
/* || |x|^r f ||. */
OST_API ost_status ost_field_weighted_norm(const ost_field* field, double r, double* out);
/* sign = +1 or -1. */
OST_API ost_status ost_apply_group(const ost_field* field, double t, int sign, ost_field** out);

typedef struct ost_solver_options {
  double T;
  double dt;
  double tol;
  int max_iter;
  int dealias;
  int sign;
  double s;
} ost_solver_options;

OST_API void ost_solver_options_default(ost_solver_options* options);
/* Picard iteration; `iterates` may be NULL. OST_ERR_CONVERGENCE when the
   iteration does not contract. */
OST_API ost_status ost_picard_solve(const ost_field* u0, const ost_solver_options* options, ost_trajectory** out,
                                    int* iterates);
/* Fourth-order exponential integrator. */
OST_API ost_status ost_reference_solve(const ost_field* u0, const ost_solver_options* options,
                                       ost_trajectory** out);
OST_API void ost_trajectory_free(ost_trajectory* traj);
OST_API size_t ost_trajectory_slices(const ost_trajectory* traj);
OST_API ost_status ost_trajectory_time(const ost_trajectory* traj, size_t index, double* out);
OST_API ost_status ost_trajectory_state(const ost_trajectory* traj, size_t index, ost_field** out);
/* Sum of the six solution seminorms of a - b. */
OST_API ost_status ost_trajectory_distance(const ost_trajectory* a, const ost_trajectory* b, double s, double* out);
OST_API ost_status ost_trajectory_save(const ost_trajectory* traj, double s, const char* path);
OST_API ost_status ost_trajectory_load(const char* path, ost_trajectory** out, double* s);

OST_API ost_status ost_existence_time(const ost_field* u0, double s, double Cs, double window, double* out);

/* Experiment configuration (INI). Errors name the offending key. */
OST_API ost_status ost_config_load(const char* path, ost_config** out);
OST_API void ost_config_free(ost_config* config);
OST_API const char* ost_config_kind(const ost_config* config);
OST_API const char* ost_config_output_dir(const ost_config* config);
/* Runs the experiment and writes its outputs. Returns OST_OK,
   OST_ERR_CONVERGENCE (solver failure) or OST_INCONCLUSIVE, or an error. */
OST_API ost_status ost_run(const ost_config* config);
/* Message of the last ost_run (status detail); "" when none. */
OST_API const char* ost_config_run_message(const ost_config* config);

#ifdef __cplusplus
}
#endif

#endif
