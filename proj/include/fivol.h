#ifndef FIVOL_H
#define FIVOL_H

/* C API for the functional intrinsic volume library.
 *
 * All functions return a fivol_status; on failure the thread-local message
 * from fivol_last_error() describes the problem. Out-parameters are only
 * written on FIVOL_OK. Objects are opaque handles released with the
 * matching *_free function. Strings returned through char** are heap
 * allocated and released with fivol_string_free.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FIVOL_OK = 0,
    FIVOL_ERR_TOLERANCE = 1,
    FIVOL_ERR_PARSE = 2,
    FIVOL_ERR_CLASS = 3,
    FIVOL_ERR_NUMERIC = 4,
} fivol_status;

typedef struct fivol_function fivol_function;
typedef struct fivol_density fivol_density;
typedef struct fivol_report fivol_report;

const char* fivol_version(void);
const char* fivol_last_error(void);
void fivol_string_free(char* s);

/* ---- convex function specs (JSON schema of the funcspace module) ---- */
fivol_status fivol_function_parse(const char* json, fivol_function** out);
void fivol_function_free(fivol_function* f);
fivol_status fivol_function_to_json(const fivol_function* f, char** out);
fivol_status fivol_function_conjugate(const fivol_function* f, fivol_function** out);
int fivol_function_dim(const fivol_function* f);
/* value of f at a point; +inf reported via is_finite = 0 */
fivol_status fivol_function_eval(const fivol_function* f, const double* x, int n,
                                 double* value, int* is_finite);

/* ---- densities ---- */
fivol_status fivol_density_parse(const char* json, fivol_density** out);
void fivol_density_free(fivol_density* d);
fivol_status fivol_density_to_json(const fivol_density* d, char** out);
fivol_status fivol_density_hat(fivol_density** out);
double fivol_density_eval(const fivol_density* d, double s);

/* membership of the class Had^n_j; limits are written when they exist */
fivol_status fivol_class_check(const fivol_density* d, int j, int n, int* member,
                               double* limit_s_pow, double* limit_integral);
fivol_status fivol_transform_R(const fivol_density* d, int l, fivol_density** out);
fivol_status fivol_transform_R_inv(const fivol_density* d, int l, fivol_density** out);
/* zeta_j from the Steiner-formula family (zeta must lie in Had^n_n) */
fivol_status fivol_steiner_density(const fivol_density* d, int n, int j, fivol_density** out);

/* ---- functional intrinsic volumes ----
 * side: 0 primal, 1 dual
 * repr: 0 auto, 1 smooth_hessian, 2 dual_hessian, 3 measure_alpha,
 *       4 tau_curvature, 5 oracle
 */
fivol_status fivol_fiv(const fivol_function* f, int side, int j, const fivol_density* zeta,
                       int repr, double* out);
fivol_status fivol_fiv_oracle_ut(double t, int j, int n, const fivol_density* zeta, double* out);
/* body_json: {"kind":"ball","n":2,"rho":1.0} or {"kind":"box","halfwidths":[..]} */
fivol_status fivol_fiv_indicator(const char* body_json, int j, const fivol_density* zeta,
                                 double* out);
fivol_status fivol_classical_volumes(const char* body_json, double* out_v, int cap, int* n_out);
fivol_status fivol_cross_representation_check(const fivol_function* f, int side, int j,
                                              const fivol_density* zeta, double* dual_hessian,
                                              double* measure_alpha, double* rel_discrepancy);

/* ---- measure integrals ---- */
fivol_status fivol_ma_integral(const fivol_function* v, const fivol_density* beta, double* out);
fivol_status fivol_mixed_ma_integral(const fivol_function* const* vs, int count,
                                     const fivol_density* beta, double* out);
fivol_status fivol_conj_ma_integral(const fivol_function* u, const fivol_density* beta,
                                    double* out);
fivol_status fivol_theta_j_integral(const fivol_function* v, int j, const fivol_density* alpha,
                                    double* out);
fivol_status fivol_theta_star_j_integral(const fivol_function* u, int j,
                                         const fivol_density* alpha, double* out);

/* ---- Steiner formula reports ---- */
fivol_status fivol_default_r_nodes(int n, double* out, int cap, int* count);
fivol_status fivol_steiner_verify(const fivol_function* u, const fivol_density* zeta,
                                  const double* r_nodes, int n_nodes, fivol_report** out);
fivol_status fivol_dual_steiner_verify(const fivol_function* v, const fivol_density* zeta,
                                       const double* r_nodes, int n_nodes, fivol_report** out);
fivol_status fivol_dual_steiner_quadratic_verify(const fivol_function* v,
                                                 const fivol_density* zeta,
                                                 const double* r_nodes, int n_nodes,
                                                 fivol_report** out);
fivol_status fivol_retrieve_classical(const char* body_json, const fivol_density* zeta,
                                      const double* r_nodes, int n_nodes, fivol_report** out);
fivol_status fivol_steiner_derivative_extract(const fivol_function* u, int j,
                                              const fivol_density* zeta, double* out);

void fivol_report_free(fivol_report* rep);
int fivol_report_dim(const fivol_report* rep);
int fivol_report_num_nodes(const fivol_report* rep);
int fivol_report_polynomiality_ok(const fivol_report* rep);
double fivol_report_fit_residual(const fivol_report* rep);
/* field: "r_node" | "lhs" (by node index) or "rhs_coefficient" |
 * "fitted_coefficient" | "rel_error" | "recovered_vj" (by j) */
fivol_status fivol_report_get(const fivol_report* rep, const char* field, int index,
                              double* out);

/* ---- general-phi Steiner machinery ----
 * phi_json uses the piecewise-profile schema of the density module.
 * Evaluates the solved beta at the given sample points.
 */
fivol_status fivol_phi_beta_solve(const fivol_density* alpha, const char* phi_json, int j,
                                  int n, const double* ts, double* out_values, int count,
                                  double* max_validation_error);

#ifdef __cplusplus
}
#endif

#endif /* FIVOL_H */
