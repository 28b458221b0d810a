/* condkin - linearized condensate / normal-fluid kinetics
 *
 * C interface of the shared library. Handles are opaque; every function
 * returns a ck_status, with CK_OK == 0 on success. On failure,
 * ck_last_error() returns a thread-local description of what went wrong.
 * Status values match the CLI exit codes.
 */
#ifndef CONDKIN_H
#define CONDKIN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define CK_API __declspec(dllexport)
#else
#  define CK_API __attribute__((visibility("default")))
#endif

typedef enum ck_status {
    CK_OK = 0,
    CK_ERROR = 1,             /* I/O or unexpected failure */
    CK_ERR_VALIDATION = 2,    /* bad configuration or arguments */
    CK_ERR_INADMISSIBLE = 3,  /* expected breakdown of the reconstruction */
    CK_ERR_NO_CONVERGENCE = 4 /* iteration or quadrature budget exhausted */
} ck_status;

CK_API const char* ck_version(void);
CK_API const char* ck_last_error(void);
CK_API void ck_set_threads(int n);

/* ---- damping function --------------------------------------------------- */

/* Gamma(x) with a relative-error estimate. */
CK_API ck_status ck_gamma_eval(double x, double tol_rel, double* value,
                               double* err_estimate);
/* int_0^inf y^2/sinh(y) dy (oracle helper). */
CK_API ck_status ck_gamma_sub_integral(double tol_rel, double* value);

/* ---- profile expression language ---------------------------------------- */

CK_API ck_status ck_profile_eval(const char* text, double k, double* value);
/* Canonical printing of the parsed expression; fails when buf is too small. */
CK_API ck_status ck_profile_print(const char* text, char* buf, size_t bufsize);

/* ---- model handle: grid + measure weights + operator + spectrum ---------- */

typedef struct ck_model ck_model;

CK_API ck_status ck_model_create(double k_max, int n_nodes, double c0, ck_model** out);
CK_API void ck_model_free(ck_model* m);
CK_API int ck_model_nodes(const ck_model* m);
/* Arrays of length ck_model_nodes(); either pointer may be NULL. */
CK_API ck_status ck_model_grid(const ck_model* m, double* k, double* mu);
/* Assembles the operator and its spectral decomposition on first use. */
CK_API ck_status ck_model_eigen_summary(ck_model* m, double* lam_min, double* lam_gap,
                                        double* kernel_residual);
/* v(tau) from initial radial data f0 (length N) into out (length N). */
CK_API ck_status ck_model_propagate(ck_model* m, const double* f0, double tau,
                                    double* out);
/* Damping/Gamma(k/2) cross identification: the constant and its max spread. */
CK_API ck_status ck_model_damping_ratio(ck_model* m, double* ratio_const,
                                        double* max_relative_deviation);

/* ---- configuration-driven runs ------------------------------------------ */

/* stage: "evolve", "reconstruct", "analyze", "scan-depletion" or "all".
 * Writes the stage outputs into out_dir. An inadmissible configuration
 * writes breakdown.json and returns CK_ERR_INADMISSIBLE. When out_dir is
 * NULL the directory named in the config [output] section is used. */
CK_API ck_status ck_run_config_file(const char* config_path, const char* out_dir,
                                    const char* stage);
CK_API ck_status ck_run_config_text(const char* config_text, const char* out_dir,
                                    const char* stage);

/* gamma / operator reports for the grid of the given config (NULL: defaults) */
CK_API ck_status ck_emit_gamma_csv(const char* config_path, const char* out_dir,
                                   double argument_scale);
CK_API ck_status ck_emit_operator_reports(const char* config_path, const char* out_dir);

/* One of the shipped example configurations: "stationary", "depletion",
 * "decay". Returns the number of bytes written (excluding the terminator),
 * or 0 on error. */
CK_API size_t ck_builtin_config(const char* name, char* buf, size_t bufsize);

/* ---- validation suite ---------------------------------------------------- */

/* Runs the full acceptance suite, writing its data outputs under out_dir and
 * one "[PASS]/[FAIL] criterion" line per criterion to stdout. Returns CK_OK
 * only when every criterion passes. criteria_passed/criteria_total optional. */
CK_API ck_status ck_selftest(const char* out_dir, int* criteria_passed,
                             int* criteria_total);

#ifdef __cplusplus
}
#endif

#endif /* CONDKIN_H */
