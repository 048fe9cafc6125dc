/* C interface to the lorentz-zeta core: opaque handles + status codes.
 * All functions return LZ_OK on success; on failure the thread-local message
 * from lz_last_error() describes the problem. */
#ifndef LORENTZ_ZETA_H
#define LORENTZ_ZETA_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  LZ_OK = 0,
  LZ_ERR_CONFIG = 2,
  LZ_ERR_NUMERIC = 3,
  LZ_ERR_INVALID = 4,
  LZ_ERR_UNSUPPORTED = 5
} lz_status;

const char* lz_version(void);
const char* lz_last_error(void);

/* Config-driven experiment driver (the CLI backbone).  config_json is the
 * full experiment configuration; artifacts and manifest.json are written to
 * out_dir.  seed < 0 keeps the config seed. */
lz_status lz_run(const char* config_json, const char* subcommand,
                 const char* out_dir, long long seed);

/* ----------------------------------------------------------- metrics */

typedef struct lz_metric lz_metric;

/* metric_json: {"family": "...", "dimension": n, "params": {...}} */
lz_status lz_metric_create(const char* metric_json, lz_metric** out);
void lz_metric_destroy(lz_metric* m);
int lz_metric_dim(const lz_metric* m);

/* g row-major n*n */
lz_status lz_metric_eval(const lz_metric* m, const double* x, double* g);
lz_status lz_metric_scalar_curvature(const lz_metric* m, const double* x,
                                     double* R);

/* --------------------------------------------------- lattice operator */

typedef struct lz_operator lz_operator;

/* clifford_json: {"twist": {...}} or "{}" / NULL for the untwisted module */
lz_status lz_operator_assemble(const lz_metric* m, const char* clifford_json,
                               double L, int mnodes, lz_operator** out);
void lz_operator_destroy(lz_operator* op);
long long lz_operator_dim(const lz_operator* op);
long long lz_operator_nnz(const lz_operator* op);

/* power-iteration estimate of ||(P - i*im_lambda)^{-1}||_2 */
lz_status lz_operator_resolvent_norm(const lz_operator* op, double im_lambda,
                                     double* out_norm);

/* fiber-traced diagonal zeta density at the node nearest the origin */
lz_status lz_operator_zeta_diag(const lz_operator* op, double eps,
                                double alpha_re, double alpha_im, double theta,
                                double rtrunc, double* out_re, double* out_im);

/* ----------------------------------------------------- closed forms */

lz_status lz_flat_zeta_density(int n, double alpha_re, double alpha_im,
                               double eps, double* out_re, double* out_im);

/* Hadamard coefficient check at x0 (length n): relative error of the
 * numerically transported u1(0) against R_g/12 + twisting curvature */
lz_status lz_u1_check(const lz_metric* m, const char* clifford_json,
                      const double* x0, double* out_rel_error,
                      double* out_scalar_curvature);

/* non-trapping certification; certified = 1, inconclusive = 0 */
lz_status lz_nontrapping(const lz_metric* m, int seeds, double tmax,
                         unsigned long long seed, int* out_certified);

#ifdef __cplusplus
}
#endif

#endif /* LORENTZ_ZETA_H */
