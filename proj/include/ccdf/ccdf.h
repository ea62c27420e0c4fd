#ifndef CCDF_CCDF_H
#define CCDF_CCDF_H

/* C interface to the ccdf library. Objects are opaque handles created by
   ccdf_*_create / ccdf_*_run style calls and released with the matching
   ccdf_*_free. Every fallible call returns a ccdf_status; on failure the
   message is available from ccdf_last_error() on the same thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CCDF_BUILDING_LIBRARY)
#define CCDF_API __attribute__((visibility("default")))
#else
#define CCDF_API
#endif

typedef enum ccdf_status {
  CCDF_OK = 0,
  CCDF_ERR_DOMAIN = 1,
  CCDF_ERR_DEGENERATE_CURVE = 2,
  CCDF_ERR_NON_CLOSED_CURVATURE = 3,
  CCDF_ERR_UNDEFINED_EXPANSION = 4,
  CCDF_ERR_NOT_APPLICABLE = 5,
  CCDF_ERR_NON_CONVEX_SUPPORT = 6,
  CCDF_ERR_TRIVIAL_SOLUTION = 7,
  CCDF_ERR_PRECONDITION = 8,
  CCDF_ERR_INVALID_ARGUMENT = 9,
  CCDF_ERR_IO = 10,
  CCDF_ERR_BUFFER_TOO_SMALL = 11,
  CCDF_ERR_INTERNAL = 12
} ccdf_status;

CCDF_API const char* ccdf_version(void);
CCDF_API const char* ccdf_last_error(void);
CCDF_API const char* ccdf_status_name(ccdf_status status);

/* ---- special functions ---- */

CCDF_API ccdf_status ccdf_complete_K(double m, double* out);
CCDF_API ccdf_status ccdf_incomplete_F(double x, double m, double* out);
CCDF_API ccdf_status ccdf_jacobi_am(double u, double m, double* out);
CCDF_API ccdf_status ccdf_jacobi_cn_sn_dn(double u, double m, double* cn, double* sn, double* dn);
CCDF_API ccdf_status ccdf_closure_integral(double t, double* out);

/* ---- curves ---- */

typedef struct ccdf_curve ccdf_curve;

typedef struct ccdf_curve_metrics {
  double length;
  double signed_area;
  int omega;
  double turning_raw;
  double k_bar;
  double K_osc;
  double k_max_abs;
  double centroid_x;
  double centroid_y;
} ccdf_curve_metrics;

/* xy holds n interleaved (x, y) pairs. */
CCDF_API ccdf_status ccdf_curve_create(const double* xy, size_t n, ccdf_curve** out);
CCDF_API ccdf_status ccdf_curve_circle(int omega, double radius, int samples, ccdf_curve** out);
CCDF_API ccdf_status ccdf_curve_read_csv(const char* path, ccdf_curve** out);
CCDF_API ccdf_status ccdf_curve_write_csv(const ccdf_curve* curve, const char* path);
CCDF_API void ccdf_curve_free(ccdf_curve* curve);
CCDF_API size_t ccdf_curve_size(const ccdf_curve* curve);
/* Copies min(n, size) points into xy (2 doubles per point). */
CCDF_API ccdf_status ccdf_curve_points(const ccdf_curve* curve, double* xy, size_t n);
CCDF_API ccdf_status ccdf_curve_metrics_get(const ccdf_curve* curve, ccdf_curve_metrics* out);
CCDF_API ccdf_status ccdf_curve_resample(const ccdf_curve* curve, int samples, ccdf_curve** out, int* under_resolved);
CCDF_API ccdf_status ccdf_curve_curvature(const ccdf_curve* curve, double* k, size_t n);

/* Writes curves side by side, each with its label, as one SVG file. */
CCDF_API ccdf_status ccdf_curves_write_svg(const ccdf_curve* const* curves, const char* const* labels, size_t count,
                                           const char* path);

/* ---- stationary solutions ---- */

typedef struct ccdf_lemniscate_info {
  int j;
  int samples;
  double c;
  double period;
  double theta_max;
  double closure_gap;
} ccdf_lemniscate_info;

CCDF_API ccdf_status ccdf_super_lemniscate(int j, int samples, ccdf_curve** out, ccdf_lemniscate_info* info);
CCDF_API ccdf_status ccdf_stationarity_residual(const ccdf_curve* curve, double c, double* out);
CCDF_API ccdf_status ccdf_closure_residual(double c, double* out);

typedef struct ccdf_ode_solution {
  double alpha;
  double beta;
} ccdf_ode_solution;

CCDF_API ccdf_status ccdf_solve_curvature_ode(double c, double k0, double k1, ccdf_ode_solution* out);
CCDF_API double ccdf_ode_curvature(double c, const ccdf_ode_solution* sol, double s);

typedef enum ccdf_homothetic_identity { CCDF_LEMNISCATE_MU = 0, CCDF_LEMNISCATE_SUPPORT = 1 } ccdf_homothetic_identity;

CCDF_API ccdf_status ccdf_homothetic_check(const ccdf_curve* curve, ccdf_homothetic_identity which, double* residual,
                                           double* fitted_A);

/* ---- spectral stability ---- */

#define CCDF_RATIONAL_CHARS 128

typedef enum ccdf_verdict { CCDF_STABLE = 0, CCDF_UNSTABLE = 1, CCDF_BORDERLINE = 2 } ccdf_verdict;

typedef struct ccdf_stability_report {
  int omega;
  double c;
  double lambda_hat;
  int argmin_n;
  ccdf_verdict verdict;
  int c_minus_is_neg_infinity;
  double c_minus;
  double c_plus;
  int has_roots;
  double r_minus;
  double r_plus;
  /* Exact values as "p/q" or integer strings. */
  char c_exact[CCDF_RATIONAL_CHARS];
  char lambda_hat_exact[CCDF_RATIONAL_CHARS];
  char c_minus_exact[CCDF_RATIONAL_CHARS];
  char c_plus_exact[CCDF_RATIONAL_CHARS];
} ccdf_stability_report;

CCDF_API const char* ccdf_verdict_name(ccdf_verdict v);
CCDF_API double ccdf_symbol(double x, double c);
CCDF_API ccdf_status ccdf_lambda_hat(double c, int omega, double* value, int* argmin_n);
/* c is parsed exactly ("1.001", "3/52", "-0.5"). */
CCDF_API ccdf_status ccdf_stability_report_get(const char* c_text, int omega, ccdf_stability_report* out);
/* Writes up to cap values into omegas; count receives the full size. */
CCDF_API ccdf_status ccdf_stable_omegas(const char* c_text, int omega_max, int* omegas, size_t cap, size_t* count);
CCDF_API ccdf_status ccdf_stable_omegas_lattice(double c, int omega_max, int* omegas, size_t cap, size_t* count);

typedef struct ccdf_grid ccdf_grid;

CCDF_API ccdf_status ccdf_stability_grid(double c_min, double c_max, int omega_max, int resolution, int threads,
                                         ccdf_grid** out);
CCDF_API void ccdf_grid_free(ccdf_grid* grid);
/* Columns: omega,c,stable. */
CCDF_API ccdf_status ccdf_grid_write_csv(const ccdf_grid* grid, const char* path);
/* guides may be NULL for the default set 1/9, 1, 3/2. */
CCDF_API ccdf_status ccdf_grid_write_svg(const ccdf_grid* grid, const char* path, const char* title,
                                         const double* guides, size_t guide_count);

/* ---- flow ---- */

typedef enum ccdf_flow_mode { CCDF_UNNORMALISED = 0, CCDF_LENGTH_NORMALISED = 1 } ccdf_flow_mode;

typedef struct ccdf_flow_config {
  double c;
  ccdf_flow_mode mode;
  int samples;
  double dt_safety;
  int reparam_every;
  double resample_tolerance;
  int has_t_end;
  double t_end;
  double stop_kmax;
  int has_stop_koscmax;
  double stop_koscmax;
  int has_stop_kosc_min;
  double stop_kosc_min;
  int record_every;
  int snapshot_every;
  int record_translation_energy;
  long long max_steps;
} ccdf_flow_config;

typedef enum ccdf_run_status {
  CCDF_RUN_COMPLETED = 0,
  CCDF_RUN_CONVERGED = 1,
  CCDF_RUN_BLOWUP = 2,
  CCDF_RUN_KOSC_EXCEEDED = 3,
  CCDF_RUN_STEP_LIMIT = 4
} ccdf_run_status;

typedef struct ccdf_record {
  double t;
  double L;
  double A;
  int omega;
  double K_osc;
  double k_max;
  double lambda;
  double sigma;
  double cx;
  double cy;
  double e_tr;
} ccdf_record;

typedef struct ccdf_run_summary {
  ccdf_run_status status;
  double final_time;
  long long steps;
  double blowup_lower;
  double blowup_upper;
  int resamples;
  int under_resolved_resamples;
  double max_length_drift;
  double max_length_correction;
  double max_truncated_fraction;
} ccdf_run_summary;

typedef struct ccdf_run ccdf_run;

CCDF_API void ccdf_flow_config_default(ccdf_flow_config* config);
CCDF_API const char* ccdf_run_status_name(ccdf_run_status status);
CCDF_API ccdf_status ccdf_flow_run(const ccdf_curve* initial, const ccdf_flow_config* config, ccdf_run** out);
CCDF_API void ccdf_run_free(ccdf_run* run);
CCDF_API ccdf_status ccdf_run_summary_get(const ccdf_run* run, ccdf_run_summary* out);
CCDF_API const char* ccdf_run_stop_reason(const ccdf_run* run);
CCDF_API size_t ccdf_run_record_count(const ccdf_run* run);
CCDF_API ccdf_status ccdf_run_record(const ccdf_run* run, size_t index, ccdf_record* out);
CCDF_API size_t ccdf_run_snapshot_count(const ccdf_run* run);
/* Caller owns the returned curve. */
CCDF_API ccdf_status ccdf_run_snapshot(const ccdf_run* run, size_t index, double* time, ccdf_curve** curve);
CCDF_API ccdf_status ccdf_run_final_curve(const ccdf_run* run, ccdf_curve** curve);
CCDF_API ccdf_status ccdf_run_write_series_csv(const ccdf_run* run, const char* path);
/* Filmstrip of at most max_frames evenly spaced frames taken from the initial
   curve, the snapshots and the final curve. */
CCDF_API ccdf_status ccdf_run_write_filmstrip_svg(const ccdf_run* run, const char* path, size_t max_frames);
/* Length-normalised runs ending with K_osc < 1e-8 only. */
CCDF_API ccdf_status ccdf_run_sigma_asymptotics(const ccdf_run* run, double c, double* sigma_inf, double* decay_slope);

/* ---- perturbations ---- */

CCDF_API ccdf_status ccdf_support_curve(int omega, int n0, double eta, int samples, ccdf_curve** out);
CCDF_API ccdf_status ccdf_Q_functional(const ccdf_curve* curve, double c, double* out);
CCDF_API ccdf_status ccdf_Q_fourier(const ccdf_curve* curve, double c, int n_max, double* out);
CCDF_API ccdf_status ccdf_R_functional(const ccdf_curve* curve, double c, double* out);
CCDF_API ccdf_status ccdf_e_prime_prediction(int omega, int n0, double eta, double c, double* out);
/* Flow-measured de/dt against -Q + R on the curve resampled to `samples`. */
CCDF_API ccdf_status ccdf_e_evolution_check(const ccdf_curve* curve, double c, int samples, double* measured,
                                            double* identity_rhs);

typedef struct ccdf_instability_row {
  double eta;
  double e0;
  double e_prime_measured;
  double e_prime_predicted;
  double measured_over_eta2;
  double Q;
  double R;
  double identity_discrepancy;
} ccdf_instability_row;

typedef struct ccdf_instability_summary {
  double c;
  int omega;
  int n0;
  double a;
  double lambda_hat;
  double p_n0;
  double limit;
  int all_positive;
  double max_relative_error;
  double observed_order;
  ccdf_verdict verdict;
} ccdf_instability_summary;

typedef struct ccdf_instability ccdf_instability;

/* n0 <= 0 selects the argmin mode of lambda_hat. */
CCDF_API ccdf_status ccdf_instability_run(double c, int omega, int n0, const double* etas, size_t eta_count, int samples,
                                          int threads, ccdf_instability** out);
CCDF_API void ccdf_instability_free(ccdf_instability* exp);
CCDF_API ccdf_status ccdf_instability_summary_get(const ccdf_instability* exp, ccdf_instability_summary* out);
CCDF_API size_t ccdf_instability_row_count(const ccdf_instability* exp);
CCDF_API ccdf_status ccdf_instability_row_get(const ccdf_instability* exp, size_t index, ccdf_instability_row* out);

#ifdef __cplusplus
}
#endif

#endif
