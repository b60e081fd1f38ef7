#ifndef RRR_H
#define RRR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum RrrStatus {
  RRR_STATUS_OK = 0,
  RRR_STATUS_NULL_POINTER = 1,
  RRR_STATUS_INVALID_ARGUMENT = 2,
  RRR_STATUS_DIMENSION_MISMATCH = 3,
  RRR_STATUS_DOMAIN_MISMATCH = 4,
  RRR_STATUS_CAP_EXCEEDED = 5,
  RRR_STATUS_UNSUPPORTED_WIDTH = 6,
  RRR_STATUS_FORMAT = 7,
  RRR_STATUS_IO = 8,
  RRR_STATUS_NUMERIC = 9,
  RRR_STATUS_BUFFER_TOO_SMALL = 10,
  RRR_STATUS_PANIC = 11,
} RrrStatus;

// Values accepted wherever a `domain` argument is taken.
typedef enum RrrDomain {
  // Variables take values in {-1, +1}.
  RRR_DOMAIN_PLUS_MINUS_ONE = 0,
  // Variables take values in {0, 1}.
  RRR_DOMAIN_ZERO_ONE = 1,
} RrrDomain;

typedef struct RrrMrf RrrMrf;

// Exact width-2 rounding distribution together with the solution it came from.
typedef struct RrrPx RrrPx;

typedef struct RrrRbm RrrRbm;

typedef struct RrrRelaxed RrrRelaxed;

// Relaxation solver settings; initialize with [`rrr_lrp_options_default`].
typedef struct RrrLrpOptions {
  size_t width;
  size_t max_iters;
  double rel_tol;
  // Nonzero selects Armijo backtracking instead of the fixed 1/L step.
  uint8_t backtracking;
  size_t restarts;
  uint64_t seed;
} RrrLrpOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failed call on this thread, or NULL if the
// last call succeeded. Valid until the next call into the library on the
// same thread; do not free.
const char *rrr_last_error(void);

// Library version as a static NUL-terminated string.
const char *rrr_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer obtained from this library that has not been freed.
void rrr_string_free(char *s);

// Creates an MRF from an `n × n` row-major matrix (symmetrized on the way in).
//
// # Safety
// `a` must point to `n * n` doubles; `out_mrf` must be a valid pointer.
enum RrrStatus rrr_mrf_new(const double *a, size_t n, uint32_t domain, struct RrrMrf **out_mrf);

// # Safety
// `mrf` must be NULL or a live handle from this library.
void rrr_mrf_free(struct RrrMrf *mrf);

// Number of variables, or 0 for NULL.
//
// # Safety
// `mrf` must be NULL or a live handle.
size_t rrr_mrf_n(const struct RrrMrf *mrf);

// Copies the symmetrized `n × n` matrix into `a_out`.
//
// # Safety
// `a_out` must hold `len` doubles.
enum RrrStatus rrr_mrf_matrix(const struct RrrMrf *mrf, double *a_out, size_t len);

// `xᵀAx`.
//
// # Safety
// `x` must hold `n` entries; `score_out` must be valid.
enum RrrStatus rrr_mrf_score(const struct RrrMrf *mrf,
                             const int8_t *x,
                             size_t n,
                             double *score_out);

// Parses an MRF instance document (`"kind": "mrf"`).
//
// # Safety
// `json` must be a NUL-terminated string.
enum RrrStatus rrr_mrf_from_json(const char *json, struct RrrMrf **out_mrf);

// Serializes an MRF as an instance document. Free the result with
// [`rrr_string_free`].
//
// # Safety
// `json_out` must be valid.
enum RrrStatus rrr_mrf_to_json(const struct RrrMrf *mrf, char **json_out);

// Creates an RBM from an `m × p` row-major weight matrix and bias vectors.
//
// # Safety
// `w` must hold `m * p` doubles, `a` `m` doubles and `b` `p` doubles.
enum RrrStatus rrr_rbm_new(const double *w,
                           size_t m,
                           size_t p,
                           const double *a,
                           const double *b,
                           uint32_t domain,
                           struct RrrRbm **out_rbm);

// ±1 RBM with all parameters drawn from N(0, 1).
//
// # Safety
// `out_rbm` must be valid.
enum RrrStatus rrr_rbm_random(size_t m, size_t p, uint64_t seed, struct RrrRbm **out_rbm);

// Random ±1 RBM with `pairs` planted (visible, hidden) pairs.
//
// # Safety
// `out_rbm` must be valid.
enum RrrStatus rrr_rbm_hard(size_t m,
                            size_t p,
                            size_t pairs,
                            double couple,
                            double bias,
                            uint64_t seed,
                            struct RrrRbm **out_rbm);

// Parses an RBM instance document (`"kind": "rbm"`).
//
// # Safety
// `json` must be a NUL-terminated string.
enum RrrStatus rrr_rbm_from_json(const char *json, struct RrrRbm **out_rbm);

// # Safety
// `json_out` must be valid.
enum RrrStatus rrr_rbm_to_json(const struct RrrRbm *rbm, char **json_out);

// # Safety
// `rbm` must be NULL or a live handle.
void rrr_rbm_free(struct RrrRbm *rbm);

// `vᵀWh + aᵀv + bᵀh`.
//
// # Safety
// `v` must hold `m` entries and `h` `p` entries.
enum RrrStatus rrr_rbm_score(const struct RrrRbm *rbm,
                             const int8_t *v,
                             size_t m,
                             const int8_t *h,
                             size_t p,
                             double *score_out);

// Rewrites an RBM as a ±1 MRF over `(aux, v, h)`. For every RBM state,
// `rbm score = mrf score of (+1, v, h) + *offset_out` (the offset is 0 for
// ±1 RBMs).
//
// # Safety
// Out-pointers must be valid.
enum RrrStatus rrr_rbm_embed(const struct RrrRbm *rbm, struct RrrMrf **out_mrf, double *offset_out);

// Exhaustive MAP search (n ≤ 24). Ties resolve to the lexicographically
// smallest assignment.
//
// # Safety
// `x_out` must hold `n` entries.
enum RrrStatus rrr_brute_force_map(const struct RrrMrf *mrf,
                                   int8_t *x_out,
                                   size_t n,
                                   double *score_out);

// Fills `opts` with the default solver settings (width 2, 8 restarts,
// 10 000 iterations, relative tolerance 1e-8, fixed step, seed 0).
//
// # Safety
// `opts` must be valid.
enum RrrStatus rrr_lrp_options_default(struct RrrLrpOptions *opts);

// Solves the width-k relaxation by projected gradient ascent.
//
// # Safety
// `opts` may be NULL (defaults); `out_relaxed` must be valid.
enum RrrStatus rrr_solve_lrp(const struct RrrMrf *mrf,
                             const struct RrrLrpOptions *opts,
                             struct RrrRelaxed **out_relaxed);

// # Safety
// `relaxed` must be NULL or a live handle.
void rrr_relaxed_free(struct RrrRelaxed *relaxed);

// Relaxed objective `tr(XᵀAX)`, or NaN for NULL.
//
// # Safety
// `relaxed` must be NULL or a live handle.
double rrr_relaxed_objective(const struct RrrRelaxed *relaxed);

// Width k of the solution, or 0 for NULL.
//
// # Safety
// `relaxed` must be NULL or a live handle.
size_t rrr_relaxed_width(const struct RrrRelaxed *relaxed);

// Copies the `n × k` solution matrix, row-major.
//
// # Safety
// `x_out` must hold `len` doubles.
enum RrrStatus rrr_relaxed_matrix(const struct RrrRelaxed *relaxed, double *x_out, size_t len);

// Draws `count` hyperplane roundings of the relaxed solution. Sample `t`
// occupies `samples_out[t*n .. (t+1)*n]`; its score is `scores_out[t]`.
//
// # Safety
// `samples_out` must hold `count * n` entries, `scores_out` `count`.
enum RrrStatus rrr_sample(const struct RrrMrf *mrf,
                          const struct RrrRelaxed *relaxed,
                          size_t count,
                          uint64_t seed,
                          int8_t *samples_out,
                          double *scores_out);

// Annealed Gibbs from `chains` uniform random starts, `sweeps` sweeps each on
// a linear schedule from `t_high` to 1. Writes the best state seen.
// A nonzero `clamp_auxiliary` holds coordinate 0 at +1, which is what an
// embedded RBM (see `rrr_rbm_embed`) needs.
//
// # Safety
// `x_out` must hold `n` entries.
enum RrrStatus rrr_annealed_gibbs(const struct RrrMrf *mrf,
                                  double t_high,
                                  size_t sweeps,
                                  size_t chains,
                                  uint8_t clamp_auxiliary,
                                  uint64_t seed,
                                  int8_t *x_out,
                                  size_t n,
                                  double *score_out);

// Annealed Gibbs started from `chains` roundings of the relaxed solution;
// `clamp_auxiliary` as for `rrr_annealed_gibbs`.
//
// # Safety
// `x_out` must hold `n` entries.
enum RrrStatus rrr_rrr_ag(const struct RrrMrf *mrf,
                          const struct RrrRelaxed *relaxed,
                          double t_high,
                          size_t sweeps,
                          size_t chains,
                          uint8_t clamp_auxiliary,
                          uint64_t seed,
                          int8_t *x_out,
                          size_t n,
                          double *score_out);

// Builds the exact rounding distribution of a width-2 solution.
//
// # Safety
// `out_px` must be valid.
enum RrrStatus rrr_px_build(const struct RrrRelaxed *relaxed, struct RrrPx **out_px);

// # Safety
// `px` must be NULL or a live handle.
void rrr_px_free(struct RrrPx *px);

// Probability that rounding produces the ±1 assignment `x`.
//
// # Safety
// `x` must hold `n` entries.
enum RrrStatus rrr_px_query(const struct RrrPx *px, const int8_t *x, size_t n, double *prob_out);

// Writes the support of the distribution: pattern `s` goes to
// `assignments_out[s*n .. (s+1)*n]` with probability `probs_out[s]`.
// `capacity` is the number of patterns the buffers can hold; `2n` always
// suffices. `*count_out` receives the support size, also when the buffers
// are too small (status `RRR_STATUS_BUFFER_TOO_SMALL`).
//
// # Safety
// `assignments_out` must hold `capacity * n` entries, `probs_out` `capacity`.
enum RrrStatus rrr_px_support(const struct RrrPx *px,
                              int8_t *assignments_out,
                              double *probs_out,
                              size_t capacity,
                              size_t *count_out);

// Exact `log Σ exp(xᵀAx)` (n ≤ 24).
//
// # Safety
// `logz_out` must be valid.
enum RrrStatus rrr_exact_logz_mrf(const struct RrrMrf *mrf, double *logz_out);

// Exact RBM `log Z` with the hidden layer summed out (m ≤ 24).
//
// # Safety
// `logz_out` must be valid.
enum RrrStatus rrr_exact_logz_rbm(const struct RrrRbm *rbm, double *logz_out);

// Annealed importance sampling estimate of the RBM `log Z`.
// `weight_std_out` may be NULL.
//
// # Safety
// `logz_out` must be valid.
enum RrrStatus rrr_ais_logz(const struct RrrRbm *rbm,
                            size_t num_temps,
                            size_t num_runs,
                            uint64_t seed,
                            double *logz_out,
                            double *weight_std_out);

// Importance-sampling estimate of `log Z` with the rounding distribution of
// a width-2 solution as proposal, from `count` samples.
//
// # Safety
// `logz_out` must be valid.
enum RrrStatus rrr_rrr_is(const struct RrrMrf *mrf,
                          const struct RrrRelaxed *relaxed,
                          size_t count,
                          uint64_t seed,
                          double *logz_out);

// The expectation of the importance-sampling estimator: `log Σ exp(xᵀAx)`
// over the support of the rounding distribution.
//
// # Safety
// `logz_out` must be valid.
enum RrrStatus rrr_rrr_is_exact_support(const struct RrrMrf *mrf,
                                        const struct RrrRelaxed *relaxed,
                                        double *logz_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RRR_H */
