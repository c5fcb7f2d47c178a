/* C interface to the gcs library.
 *
 * All objects are opaque handles created by a create or load function and
 * released with the matching destroy function. Every fallible call returns a
 * gcs_status; on failure gcs_last_error() describes the problem for the
 * calling thread. Output parameters are left untouched on failure.
 */
#ifndef GCS_GCS_H
#define GCS_GCS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GCS_BUILDING_LIBRARY)
#    define GCS_API __declspec(dllexport)
#  else
#    define GCS_API __declspec(dllimport)
#  endif
#else
#  define GCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcs_status {
    GCS_OK = 0,
    GCS_ERR_DIMENSION = 1,
    GCS_ERR_NOT_HERMITIAN = 2,
    GCS_ERR_NOT_NORMALIZED = 3,
    GCS_ERR_DEGENERATE = 4,
    GCS_ERR_SINGULAR = 5,
    GCS_ERR_GRID = 6,
    GCS_ERR_PARSE = 7,
    GCS_ERR_IO = 8,
    GCS_ERR_INVALID_ARGUMENT = 9,
    GCS_ERR_NO_SOLUTION = 10,
    GCS_ERR_INTERNAL = 99
} gcs_status;

typedef struct gcs_complex {
    double re;
    double im;
} gcs_complex;

typedef enum gcs_label {
    GCS_LABEL_CS = 0,
    GCS_LABEL_GCS,
    GCS_LABEL_HR,
    GCS_LABEL_HRS,
    GCS_LABEL_GUR,
    GCS_LABEL_QFORM,
    GCS_LABEL_WIDTH
} gcs_label;

typedef struct gcs_report {
    gcs_label label;
    double lhs;
    double rhs;
    double residual;
    double tolerance;
    int satisfied;
    int has_lambda;
    gcs_complex lambda;
} gcs_report;

typedef struct gcs_state_s *gcs_state;
typedef struct gcs_operator_s *gcs_operator;
typedef struct gcs_grid_s *gcs_grid;
typedef struct gcs_wave_s *gcs_wave;

GCS_API const char *gcs_version(void);
GCS_API const char *gcs_last_error(void);
GCS_API const char *gcs_status_string(gcs_status status);

/* Warnings are delivered to `handler` (NULL restores printing to stderr). */
typedef void (*gcs_warning_handler)(const char *message, void *user_data);
GCS_API void gcs_set_warning_handler(gcs_warning_handler handler, void *user_data);

/* ---- states and operators ------------------------------------------- */

/* `im` may be NULL (all zeros); `units` may be NULL. */
GCS_API gcs_status gcs_state_create(size_t dim, const double *re, const double *im,
                                    const char *units, gcs_state *out);
GCS_API gcs_status gcs_state_load(const char *path, gcs_state *out);
GCS_API gcs_status gcs_state_save(gcs_state state, const char *path);
GCS_API void gcs_state_destroy(gcs_state state);
GCS_API size_t gcs_state_dim(gcs_state state);
GCS_API gcs_status gcs_state_get(gcs_state state, double *re, double *im);

/* Row-major dim*dim arrays; `im` may be NULL. */
GCS_API gcs_status gcs_operator_create(size_t dim, const double *re, const double *im,
                                       const char *units, gcs_operator *out);
GCS_API gcs_status gcs_operator_load(const char *path, gcs_operator *out);
GCS_API gcs_status gcs_operator_save(gcs_operator op, const char *path);
GCS_API void gcs_operator_destroy(gcs_operator op);
GCS_API size_t gcs_operator_dim(gcs_operator op);

GCS_API gcs_status gcs_inner_product(gcs_state a, gcs_state b, gcs_complex *out);
GCS_API gcs_status gcs_norm(gcs_state a, double *out);
GCS_API gcs_status gcs_expectation(gcs_operator op, gcs_state psi, gcs_complex *out);
GCS_API gcs_status gcs_variance(gcs_operator op, gcs_state psi, double *out);
GCS_API gcs_status gcs_deviation_vector(gcs_operator op, gcs_state psi, gcs_state *out);
GCS_API gcs_status gcs_commutator_expectation(gcs_operator a, gcs_operator b,
                                              gcs_state psi, gcs_complex *out);
GCS_API gcs_status gcs_anticommutator_expectation(gcs_operator a, gcs_operator b,
                                                  gcs_state psi, gcs_complex *out);

/* ---- inequalities ---------------------------------------------------- */

/* A negative tolerance selects the library default. */
GCS_API gcs_status gcs_quadratic_form(gcs_state a, gcs_state b, gcs_complex lambda,
                                      double *out);
GCS_API gcs_status gcs_optimal_lambda(gcs_state a, gcs_state b, gcs_complex *out);
GCS_API gcs_status gcs_cs_check(gcs_state a, gcs_state b, double tolerance,
                                gcs_report *out);
GCS_API gcs_status gcs_generalized_quadratic_form(gcs_state a, gcs_state b, gcs_state m,
                                                  gcs_complex lambda, double *out);
GCS_API gcs_status gcs_generalized_lambda(gcs_state a, gcs_state b, gcs_state m,
                                          gcs_complex *out);
GCS_API gcs_status gcs_generalized_cs_check(gcs_state a, gcs_state b, gcs_state m,
                                            double tolerance, gcs_report *out);
GCS_API gcs_status gcs_hr_bound(gcs_operator a, gcs_operator b, gcs_state psi,
                                double tolerance, gcs_report *out);
GCS_API gcs_status gcs_hrs_bound(gcs_operator a, gcs_operator b, gcs_state psi,
                                 double tolerance, gcs_report *out);
GCS_API gcs_status gcs_generalized_uncertainty_check(gcs_operator a, gcs_operator b,
                                                     gcs_state psi, gcs_state m,
                                                     double tolerance, gcs_report *out);

/* ---- grid wave functions -------------------------------------------- */

GCS_API gcs_status gcs_grid_create(size_t n, double x_max, gcs_grid *out);
GCS_API void gcs_grid_destroy(gcs_grid grid);
GCS_API size_t gcs_grid_size(gcs_grid grid);
GCS_API double gcs_grid_spacing(gcs_grid grid);
GCS_API gcs_status gcs_grid_points(gcs_grid grid, double *x);

GCS_API gcs_status gcs_wave_create(gcs_grid grid, const double *re, const double *im,
                                   gcs_wave *out);
GCS_API void gcs_wave_destroy(gcs_wave wave);
GCS_API size_t gcs_wave_size(gcs_wave wave);
GCS_API gcs_status gcs_wave_samples(gcs_wave wave, double *re, double *im);

GCS_API gcs_status gcs_quadrature(gcs_wave f, gcs_complex *out);
/* method: 0 spectral, 1 fourth-order central differences */
GCS_API gcs_status gcs_derivative(gcs_wave psi, int method, gcs_wave *out);
GCS_API gcs_status gcs_position_moments(gcs_wave psi, double *mean, double *variance);
GCS_API gcs_status gcs_momentum_moments(gcs_wave psi, double hbar, double *mean,
                                        double *variance);
GCS_API gcs_status gcs_gaussian_min_packet(double delta_x, gcs_grid grid, gcs_wave *out);
GCS_API gcs_status gcs_epsilon_functional(gcs_wave psi, gcs_complex *out);
GCS_API gcs_status gcs_lambda_min_packet(double delta_p_sq, double hbar,
                                         gcs_complex *lambda, gcs_complex *a_sq);
GCS_API gcs_status gcs_make_um(double alpha, gcs_grid grid, gcs_wave *out);
GCS_API gcs_status gcs_f_integral(double alpha, gcs_complex a_sq, gcs_grid grid,
                                  gcs_wave *out);
GCS_API gcs_status gcs_modified_packet_general(gcs_complex c, gcs_complex a1,
                                               gcs_complex a2, gcs_complex a_sq,
                                               double alpha, gcs_grid grid,
                                               gcs_wave *out);
GCS_API gcs_status gcs_modified_packet_explicit(gcs_complex c, gcs_complex a1,
                                                double alpha, gcs_complex a_sq,
                                                gcs_grid grid, gcs_wave *out);
GCS_API gcs_status gcs_residual_check(gcs_wave psi, gcs_complex lambda,
                                      gcs_complex x_m_coeff, double alpha, double hbar,
                                      double *out);

typedef struct gcs_modified_params {
    gcs_complex c_norm;
    gcs_complex a1;
    gcs_complex a2;
    double alpha;
    gcs_complex a_sq;
    double delta_sq_A;
    gcs_complex abar_sq;
    gcs_complex x_m;
} gcs_modified_params;

typedef struct gcs_solution {
    gcs_modified_params params;
    gcs_complex constraint_offset;
    gcs_complex constraint_slope_residual;
    int one_parameter_family;
    double a1_closure;
    double a2_closure;
} gcs_solution;

/* `a1` may be NULL to select the pure-Gaussian branch. `psi_out` may be
 * NULL; otherwise it receives the normalized packet. */
GCS_API gcs_status gcs_solve_self_consistent(gcs_complex c_seed, double alpha,
                                             gcs_complex a_sq, gcs_grid grid,
                                             const gcs_complex *a1, gcs_solution *out,
                                             gcs_wave *psi_out);

/* relative_deviation uses 1/2 - a1 a2 as the denominator,
 * relative_deviation_derived uses -eps + conj(a1) a2. */
typedef struct gcs_width_report {
    gcs_report report;
    double relative_deviation;
    double relative_deviation_derived;
    gcs_complex predicted_a_sq;
    gcs_complex predicted_a_sq_derived;
} gcs_width_report;

GCS_API gcs_status gcs_width_relation_check(const gcs_modified_params *params,
                                            gcs_wave psi, gcs_width_report *out);

/* ---- campaigns (drive the command-line front end) ------------------- */

typedef enum gcs_format { GCS_FORMAT_CSV = 0, GCS_FORMAT_JSON = 1 } gcs_format;

typedef struct gcs_check_options {
    const char *inequality; /* cs|gcs|hr|hrs|gur|qform|all */
    size_t dim;
    size_t trials;
    uint64_t seed;
    double tolerance;       /* negative: library default */
    int m_mode_any;         /* 0: m orthogonal to psi, 1: any unit vector */
    const char *state_path; /* optional file inputs, NULL when absent */
    const char *op_a_path;
    const char *op_b_path;
    const char *m_path;
    const char *vec_a_path;
    const char *vec_b_path;
    gcs_format format;
    int timestamp;
} gcs_check_options;

typedef struct gcs_packet_options {
    double delta_x;
    size_t grid_n;
    double x_max; /* <= 0: 10 * delta_x */
    double hbar;
    int timestamp;
} gcs_packet_options;

typedef struct gcs_modified_options {
    const double *alphas;
    size_t alpha_count;
    gcs_complex a_sq;
    const gcs_complex *a1; /* NULL: pure-Gaussian branch */
    gcs_complex c_seed;
    size_t grid_n;
    double x_max;
    double hbar;
    int timestamp;
} gcs_modified_options;

/* Reports are returned as heap strings released with gcs_string_free. */
GCS_API void gcs_string_free(char *text);

/* *all_satisfied is 1 when every row satisfied its inequality. */
GCS_API gcs_status gcs_run_check(const gcs_check_options *options, char **report,
                                 int *all_satisfied);
GCS_API gcs_status gcs_run_packet(const gcs_packet_options *options, char **samples_csv,
                                  char **summary_json);
GCS_API gcs_status gcs_run_modified(const gcs_modified_options *options, char **report);

/* Parses "alpha=LO:HI:STEPS"; *values receives a heap array released with
 * gcs_doubles_free. */
GCS_API gcs_status gcs_parse_sweep(const char *spec, double **values, size_t *count);
GCS_API void gcs_doubles_free(double *values);

GCS_API double gcs_default_tolerance(void);
GCS_API const char *gcs_tolerance_env_name(void);
GCS_API const char *gcs_columns_help(const char *command);

#ifdef __cplusplus
}
#endif

#endif /* GCS_GCS_H */
