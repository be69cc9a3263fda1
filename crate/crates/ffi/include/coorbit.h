#ifndef COORBIT_H
#define COORBIT_H

/* Generated by cbindgen from the coorbit-ffi sources. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoorbitStatus {
  COORBIT_STATUS_OK = 0,
  COORBIT_STATUS_NULL_POINTER = 1,
  COORBIT_STATUS_INVALID_ARGUMENT = 2,
  COORBIT_STATUS_DIMENSION_MISMATCH = 3,
  COORBIT_STATUS_NOT_POSITIVE_DEFINITE = 4,
  COORBIT_STATUS_NOT_INTEGRABLE = 5,
  COORBIT_STATUS_TRUNCATION_TOO_SMALL = 6,
  COORBIT_STATUS_NOT_A_FRAME = 7,
  COORBIT_STATUS_DIVERGED = 8,
  COORBIT_STATUS_CONFIG_ERROR = 9,
  COORBIT_STATUS_TOLERANCE_VIOLATED = 10,
  COORBIT_STATUS_IO = 11,
  COORBIT_STATUS_NUMERICAL = 12,
  COORBIT_STATUS_PANIC = 13,
} CoorbitStatus;

// A generalized Gaussian `c·exp(−πAt·t + b·t)`.
typedef struct CoorbitGaussian CoorbitGaussian;

// A representation of one of the supported groups.
typedef struct CoorbitRep CoorbitRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *coorbit_last_error(void);

// Library version as a static string.
const char *coorbit_version(void);

// The standard Gaussian `2^{d/4} e^{−π|t|²}` on `ℝ^dim`.
//
// # Safety
// `out` must be valid for writes.
enum CoorbitStatus coorbit_gaussian_standard(uintptr_t dim, struct CoorbitGaussian **out);

// `c·exp(−πAt·t + b·t)` from row-major `A` (`dim²` entries, real and
// imaginary parts) and `b` (`dim` entries).
//
// # Safety
// `a_re`, `a_im` must hold `dim*dim` doubles, `b_re`, `b_im` `dim` doubles,
// and `out` must be valid for writes.
enum CoorbitStatus coorbit_gaussian_new(uintptr_t dim,
                                        double amp_re,
                                        double amp_im,
                                        const double *a_re,
                                        const double *a_im,
                                        const double *b_re,
                                        const double *b_im,
                                        struct CoorbitGaussian **out);

// `N_C g` for real symmetric row-major `C`.
//
// # Safety
// `g` must be a live handle, `c` must hold `dim²` doubles where `dim` is the
// dimension of `g`, and `out` must be valid for writes.
enum CoorbitStatus coorbit_gaussian_chirp(const struct CoorbitGaussian *g,
                                          const double *c,
                                          struct CoorbitGaussian **out);

// # Safety
// `g` must be null or a handle not yet freed.
void coorbit_gaussian_free(struct CoorbitGaussian *g);

// # Safety
// `g` must be a live handle and `out` valid for writes.
enum CoorbitStatus coorbit_gaussian_dim(const struct CoorbitGaussian *g, uintptr_t *out);

// `g(t)`.
//
// # Safety
// `g` must be a live handle, `t` must hold `dim` doubles, and the outputs
// must be valid for writes.
enum CoorbitStatus coorbit_gaussian_eval(const struct CoorbitGaussian *g,
                                         const double *t,
                                         double *out_re,
                                         double *out_im);

// `‖g‖₂`.
//
// # Safety
// `g` must be a live handle and `out` valid for writes.
enum CoorbitStatus coorbit_gaussian_norm(const struct CoorbitGaussian *g, double *out);

// `V_g f(x, ξ)` in closed form.
//
// # Safety
// `f`, `g` must be live handles of equal dimension `d`, `x` and `xi` must
// hold `d` doubles, and the outputs must be valid for writes.
enum CoorbitStatus coorbit_stft(const struct CoorbitGaussian *f,
                                const struct CoorbitGaussian *g,
                                const double *x,
                                const double *xi,
                                double *out_re,
                                double *out_im);

// `‖N_C φ‖_{M^p}` in closed form for real symmetric row-major `C`.
//
// # Safety
// `c` must hold `dim²` doubles and `out` must be valid for writes.
enum CoorbitStatus coorbit_chirp_mp_norm(uintptr_t dim, const double *c, double p, double *out);

// Unweighted `‖V_g f‖_{L^p}` over phase space with default truncation.
//
// # Safety
// `f`, `g` must be live handles and `out` valid for writes.
enum CoorbitStatus coorbit_modulation_norm(const struct CoorbitGaussian *f,
                                           const struct CoorbitGaussian *g,
                                           double p,
                                           double *out);

// Representation with parameters `(λ, μ)` of the group named `group`
// (`heisenberg`, `heisenberg(d)`, `g6_16`, `g5_3`, `g6_19`, `dynin_folland`).
//
// # Safety
// `group` must be a NUL-terminated string and `out` valid for writes.
enum CoorbitStatus coorbit_rep_new(const char *group,
                                   double lambda,
                                   double mu,
                                   struct CoorbitRep **out);

// # Safety
// `rep` must be null or a handle not yet freed.
void coorbit_rep_free(struct CoorbitRep *rep);

// Dimension of the space the representation acts on.
//
// # Safety
// `rep` must be a live handle and `out` valid for writes.
enum CoorbitStatus coorbit_rep_realization_dim(const struct CoorbitRep *rep, uintptr_t *out);

// Number of group coordinates.
//
// # Safety
// `rep` must be a live handle and `out` valid for writes.
enum CoorbitStatus coorbit_rep_group_dim(const struct CoorbitRep *rep, uintptr_t *out);

// Exact formal dimension under the library's Haar normalization.
//
// # Safety
// `rep` must be a live handle and `out` valid for writes.
enum CoorbitStatus coorbit_rep_formal_dimension(const struct CoorbitRep *rep, double *out);

// `π(a) g` for the group element with coordinates `coords[0..n]`.
//
// # Safety
// `rep` and `g` must be live handles, `coords` must hold `n` doubles, and
// `out` must be valid for writes.
enum CoorbitStatus coorbit_rep_apply(const struct CoorbitRep *rep,
                                     const double *coords,
                                     uintptr_t n,
                                     const struct CoorbitGaussian *g,
                                     struct CoorbitGaussian **out);

// Unweighted coorbit norm `‖V_g^π f‖_{L^p(G/Z)}` with default truncation.
//
// # Safety
// All handles must be live and `out` valid for writes.
enum CoorbitStatus coorbit_norm(const struct CoorbitRep *rep,
                                const struct CoorbitGaussian *f,
                                const struct CoorbitGaussian *g,
                                double p,
                                double *out);

// Parses `config`, runs the experiment and writes its CSV and JSON into
// `out_dir` (the configured directory when null). Returns
// `ToleranceViolated` when the run completes but a check fails.
//
// # Safety
// `config` must be a NUL-terminated string, `out_dir` null or a
// NUL-terminated string.
enum CoorbitStatus coorbit_run_experiment(const char *config, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COORBIT_H */
