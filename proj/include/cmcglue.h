/* C interface to the CMC gluing library.
 *
 * Every function returns a cmc_status; outputs go through pointer
 * arguments. Objects are opaque handles released with their _free
 * function. On failure cmc_last_error() describes the most recent error
 * raised on the calling thread. */

#ifndef CMCGLUE_H
#define CMCGLUE_H

#include <stddef.h>

#if defined(_WIN32)
#define CMC_API __declspec(dllexport)
#else
#define CMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cmc_status {
  CMC_OK = 0,
  CMC_ERR_DOMAIN = 1,
  CMC_ERR_RANGE = 2,
  CMC_ERR_SINGULAR_POINT = 3,
  CMC_ERR_INVALID_INPUT = 4,
  CMC_ERR_PERTURBATION_TOO_LARGE = 5,
  CMC_ERR_NO_SOLUTION = 6,
  CMC_ERR_CALIBRATION = 7,
  CMC_ERR_INVALID_CUT = 8,
  CMC_ERR_QUADRATURE = 9,
  CMC_ERR_INFEASIBLE = 10,
  CMC_ERR_NONCONVERGENCE = 11,
  CMC_ERR_INVALID_CONFIG = 12,
  CMC_ERR_REGIME = 13,
  CMC_ERR_INTERNAL = 99
} cmc_status;

typedef enum cmc_chain_kind { CMC_FINITE = 0, CMC_ONE_ENDED = 1 } cmc_chain_kind;

typedef struct cmc_profile cmc_profile;
typedef struct cmc_solution cmc_solution;
typedef struct cmc_surface cmc_surface;
typedef struct cmc_output cmc_output;

CMC_API const char* cmc_status_name(cmc_status s);
CMC_API const char* cmc_last_error(void);
CMC_API const char* cmc_version(void);

/* Profiles: "flat", "one-ended-exp" (1 + beta e^{-t}), "even-bump"
 * (1 + beta e^{-t^2} on [-half_length, half_length]). */
CMC_API cmc_status cmc_profile_builtin(const char* name, double beta, double half_length,
                                       cmc_profile** out);
/* A(t) from an arithmetic expression in t on [lo, hi]. */
CMC_API cmc_status cmc_profile_expression(const char* expr, int even, int one_ended,
                                          double lo, double hi, cmc_profile** out);
CMC_API void cmc_profile_free(cmc_profile* p);
/* A and its first four derivatives. */
CMC_API cmc_status cmc_profile_eval(const cmc_profile* p, double t, double out[5]);
CMC_API cmc_status cmc_scalar_curvature(const cmc_profile* p, double t, double* S,
                                        double* dS);
/* 1 when the regime assumptions hold on a sample grid, 0 otherwise. */
CMC_API cmc_status cmc_profile_check_regime(const cmc_profile* p, int* ok);

typedef struct cmc_constants {
  double C0, C1, C1p, C2;
  double c1_exponent, c1_fit_residual, c2_spread, c0_spread;
} cmc_constants;

/* with_c0 = 0 skips the paired displacement runs and leaves C0 = 0. */
CMC_API cmc_status cmc_calibrate(double r, const double* eps_grid, size_t n, int with_c0,
                                 cmc_constants* out);

typedef struct cmc_solver_options {
  int max_iterations;
  double tolerance_factor; /* times r^3 */
  double regime_C;
} cmc_solver_options;

CMC_API void cmc_solver_options_default(cmc_solver_options* o);

typedef struct cmc_solution_info {
  int spheres, necks, iterations;
  int monotone; /* -1 decreasing, +1 increasing, 0 neither */
  int regime_ok;
  double residual_norm, regime_ratio, off_triangle, telescoped_gap;
} cmc_solution_info;

typedef enum cmc_solution_field {
  CMC_FIELD_EPS = 0,
  CMC_FIELD_SIGMA = 1,
  CMC_FIELD_DELTA = 2,
  CMC_FIELD_POSITIONS = 3,
  CMC_FIELD_RESIDUAL = 4,
  CMC_FIELD_TRACE = 5
} cmc_solution_field;

/* opt may be NULL for defaults. */
CMC_API cmc_status cmc_balance_solve(const cmc_profile* p, cmc_chain_kind kind, double r,
                                     int K, double t0, const cmc_constants* constants,
                                     const cmc_solver_options* opt, cmc_solution** out);
CMC_API void cmc_solution_free(cmc_solution* s);
CMC_API cmc_status cmc_solution_get_info(const cmc_solution* s, cmc_solution_info* out);
/* Copies up to cap values; *len receives the full length. */
CMC_API cmc_status cmc_solution_get_field(const cmc_solution* s, cmc_solution_field f,
                                          double* out, size_t cap, size_t* len);

/* Glued surface from neck scales eps[0..n) and displacements delta (may be NULL). */
CMC_API cmc_status cmc_surface_assemble(const cmc_profile* p, cmc_chain_kind kind, double r,
                                        int K, double t0, const double* eps,
                                        const double* delta, size_t n, cmc_surface** out);
CMC_API cmc_status cmc_surface_from_solution(const cmc_profile* p, const cmc_solution* s,
                                             cmc_surface** out);
CMC_API void cmc_surface_free(cmc_surface* s);
CMC_API cmc_status cmc_surface_size(const cmc_surface* s, size_t* n);

typedef struct cmc_sample {
  double s, t, rho, dt, drho, d2t, d2rho, w;
  int kind; /* 0 sphere, 1 transition, 2 neck, 3 delaunay, 4 free */
  int index, side, window;
} cmc_sample;

CMC_API cmc_status cmc_surface_sample(const cmc_surface* s, size_t i, cmc_sample* out);
/* Exact ambient mean curvature at every sample; out holds cmc_surface_size values. */
CMC_API cmc_status cmc_surface_mean_curvature(const cmc_surface* s, const cmc_profile* p,
                                              double* out, size_t cap);

typedef struct cmc_norm_report {
  double sphere, transition, neck, delaunay, global, holder;
  double predicted, predicted_exponent, ratio;
  double eps, delta;
} cmc_norm_report;

CMC_API cmc_status cmc_surface_deviation(const cmc_surface* s, const cmc_profile* p,
                                         double nu, double nu_bar, int exponential_axial,
                                         cmc_norm_report* out);
/* Neck and sphere projections; *necks and *spheres receive the counts. */
CMC_API cmc_status cmc_surface_projections(const cmc_surface* s, const cmc_profile* p,
                                           double tau_scale, double* neck, size_t neck_cap,
                                           size_t* necks, double* sphere, size_t sphere_cap,
                                           size_t* spheres);
CMC_API cmc_status cmc_surface_write_csv(const cmc_surface* s, const char* path);
CMC_API cmc_status cmc_surface_write_obj(const cmc_surface* s, int angular_res,
                                         const char* path);

/* Batch pipeline: command is curvature, balance, assemble, verify, sweep or
 * export; config_json is a run configuration. The output is created even
 * when the command fails and carries the partial reports. */
CMC_API cmc_status cmc_run(const char* command, const char* config_json, int angular_res,
                           cmc_output** out);
CMC_API void cmc_output_free(cmc_output* o);
CMC_API const char* cmc_output_summary(const cmc_output* o);
CMC_API size_t cmc_output_file_count(const cmc_output* o);
CMC_API const char* cmc_output_file_name(const cmc_output* o, size_t i);
CMC_API const char* cmc_output_file_data(const cmc_output* o, size_t i, size_t* size);

#ifdef __cplusplus
}
#endif

#endif /* CMCGLUE_H */
