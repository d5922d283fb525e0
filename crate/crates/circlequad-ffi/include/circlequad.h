#ifndef CIRCLEQUAD_H
#define CIRCLEQUAD_H

/* Generated by cbindgen from the circlequad-ffi crate; do not edit by hand. */

#include <stdint.h>
#include <stddef.h>

// Built-in integrand codes for [`cq_reference_integral`] and
// [`cq_mixed_rule_apply`] (passed as a validated `int32_t`).
typedef enum CqIntegrand {
  // `F ≡ 1`.
  CQ_INTEGRAND_ONE = 0,
  // `e^z`.
  CQ_INTEGRAND_EXP = 1,
  // `e^{z/2}`.
  CQ_INTEGRAND_EXP_HALF = 2,
  // `1/(z − α)`, `α = 0.8 + 0.5i` (pole hugging the circle).
  CQ_INTEGRAND_POLE_NEAR = 3,
  // `1/(z − α)`, `α = (1+i)/5` (interior pole).
  CQ_INTEGRAND_POLE_INNER = 4,
  // Piecewise-constant step `±10` with jump at `arg z = π/2`.
  CQ_INTEGRAND_STEP_F2 = 5,
} CqIntegrand;

// Call status; `CQ_STATUS_OK` is zero, codes `2`/`3` mirror the CLI's
// validation/numerical exit codes, `4` flags a caught panic.
typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_INVALID_ARGUMENT = 2,
  CQ_STATUS_NUMERICAL_FAILURE = 3,
  CQ_STATUS_PANIC = 4,
} CqStatus;

// Regression-functional codes for [`cq_mixed_rule_apply`] (passed as a
// validated `int32_t`).
typedef enum CqWeighting {
  // Minimize the transformed residual (the published numerics).
  CQ_WEIGHTING_TRANSFORMED = 0,
  // Minimize the true discrete residual on the discarded nodes.
  CQ_WEIGHTING_TRUE_RESIDUAL = 1,
} CqWeighting;

// Opaque measure handle (Rogers–Szegő family).
typedef struct CqMeasure CqMeasure;

// Opaque node-configuration handle: uniform grid, para-orthogonal zeros,
// and the mimic selection.
typedef struct CqNodeConfig CqNodeConfig;

// A complex number as two IEEE-754 doubles.
typedef struct CqComplex {
  double re;
  double im;
} CqComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty string if no
// call has failed yet. Valid until the next failing call on this thread.
const char *cq_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cq_version(void);

// Creates a Rogers–Szegő measure handle for `q ∈ (0, 1)`. On success the
// caller owns `*out` and must release it with [`cq_measure_free`].
//
// # Safety
//
// `out` must be a valid pointer to writable storage for one handle pointer.
enum CqStatus cq_measure_rogers_szego_new(double q, struct CqMeasure **out);

// Releases a measure handle. `NULL` is a no-op.
//
// # Safety
//
// `mu` must be `NULL` or a pointer obtained from
// [`cq_measure_rogers_szego_new`] that has not been freed yet.
void cq_measure_free(struct CqMeasure *mu);

// Trigonometric moment `μ_k = I(z^k)`.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
enum CqStatus cq_moment(const struct CqMeasure *mu, int64_t k, struct CqComplex *out);

// Verblunsky coefficient `δ_n` (the reflection coefficient of the Szegő
// recurrence), defined for `n ≥ 1`.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
enum CqStatus cq_verblunsky(const struct CqMeasure *mu, size_t n, struct CqComplex *out);

// Unimodular anchoring parameter `τ` that places a zero of the degree-`m`
// para-orthogonal polynomial at `e^{iθ₀}`.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
enum CqStatus cq_anchored_tau(const struct CqMeasure *mu,
                              size_t m,
                              double theta0,
                              struct CqComplex *out);

// Builds the node configuration with the maximal feasible para-orthogonal
// degree on the `N`-node grid anchored at `θ₀`. On success the caller owns
// `*out` and must release it with [`cq_node_config_free`].
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one handle pointer.
enum CqStatus cq_node_config_max_m(const struct CqMeasure *mu,
                                   size_t n,
                                   double theta0,
                                   struct CqNodeConfig **out);

// Like [`cq_node_config_max_m`] but pins the para-orthogonal degree `m`;
// fails when `m` is infeasible on that grid.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one handle pointer.
enum CqStatus cq_node_config_with_m(const struct CqMeasure *mu,
                                    size_t n,
                                    size_t m,
                                    double theta0,
                                    struct CqNodeConfig **out);

// Releases a node-configuration handle. `NULL` is a no-op.
//
// # Safety
//
// `cfg` must be `NULL` or a pointer obtained from one of the
// `cq_node_config_*` constructors that has not been freed yet.
void cq_node_config_free(struct CqNodeConfig *cfg);

// Grid size `N` of a configuration; `0` for a `NULL` handle.
//
// # Safety
//
// `cfg` must be `NULL` or a live node-configuration handle.
size_t cq_node_config_n(const struct CqNodeConfig *cfg);

// Para-orthogonal degree `m` (= number of mimic nodes); `0` for `NULL`.
//
// # Safety
//
// `cfg` must be `NULL` or a live node-configuration handle.
size_t cq_node_config_m(const struct CqNodeConfig *cfg);

// Anchoring parameter `τ` of the configuration's para-orthogonal
// polynomial.
//
// # Safety
//
// `cfg` must be a live node-configuration handle; `out` valid for one
// `CqComplex`.
enum CqStatus cq_node_config_tau(const struct CqNodeConfig *cfg, struct CqComplex *out);

// Copies the `N` grid nodes `z_j` into `out` (length must equal `N`).
//
// # Safety
//
// `cfg` must be a live node-configuration handle; `out` valid for `len`
// entries.
enum CqStatus cq_node_config_grid(const struct CqNodeConfig *cfg,
                                  struct CqComplex *out,
                                  size_t len);

// Copies the `m` para-orthogonal zeros into `out` (length must equal `m`).
//
// # Safety
//
// `cfg` must be a live node-configuration handle; `out` valid for `len`
// entries.
enum CqStatus cq_node_config_zeros(const struct CqNodeConfig *cfg,
                                   struct CqComplex *out,
                                   size_t len);

// Copies the `m` selected (mimic) grid indices into `out` (length must
// equal `m`). Indices refer to the grid order of
// [`cq_node_config_grid`].
//
// # Safety
//
// `cfg` must be a live node-configuration handle; `out` valid for `len`
// entries.
enum CqStatus cq_node_config_selected(const struct CqNodeConfig *cfg, size_t *out, size_t len);

// Closed-form interpolatory weights on the uniform `N`-node grid, exact on
// `span{z^{−r}, …, z^{s}}` with `r + s + 1 = N`. Writes `N` weights in
// grid order.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for `len` entries.
enum CqStatus cq_uniform_weights(const struct CqMeasure *mu,
                                 size_t n,
                                 int64_t r_exp,
                                 int64_t s_exp,
                                 double theta0,
                                 struct CqComplex *out,
                                 size_t len);

// Closed-form CMV-window weights on the uniform grid: odd `N` uses the
// balanced window (`eps` ignored), even `N = 2ℓ` uses `eps = +1` for
// exactness on `span{z^{−ℓ}, …, z^{ℓ−1}}` and `eps = −1` for
// `span{z^{−(ℓ−1)}, …, z^{ℓ}}`. Writes `N` weights in grid order.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for `len` entries.
enum CqStatus cq_cmv_weights(const struct CqMeasure *mu,
                             size_t n,
                             double theta0,
                             int32_t eps,
                             struct CqComplex *out,
                             size_t len);

// Interpolatory weights on the `m` mimic nodes of `cfg` with window shift
// `p̃` (library default is `⌊(m−1)/2⌋`), exact on
// `span{z^{−p̃}, …, z^{m−1−p̃}}`. Writes `m` weights in mimic-node order.
//
// # Safety
//
// `mu` and `cfg` must be live handles; `out` valid for `len` entries.
enum CqStatus cq_mimic_weights(const struct CqMeasure *mu,
                               const struct CqNodeConfig *cfg,
                               int64_t p_tilde,
                               struct CqComplex *out,
                               size_t len);

// High-accuracy reference value of `I(F)` for a built-in integrand
// (`integrand` is a `CqIntegrand` code). A stalled oracle returns
// `CQ_STATUS_NUMERICAL_FAILURE` with the best value and gap in the error
// message.
//
// # Safety
//
// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
enum CqStatus cq_reference_integral(const struct CqMeasure *mu,
                                    int32_t integrand,
                                    double accuracy,
                                    struct CqComplex *out);

// Applies the mixed interpolation–regression rule of order `r` on `cfg` to
// a built-in integrand: Hermite–Laurent data on the mimic nodes plus a
// least-squares correction on the discarded nodes. `p` and `p_tilde` are
// the mixed and interpolatory window shifts (library defaults `⌊(r−1)/2⌋`
// and `⌊(m−1)/2⌋`); `weighting` is a `CqWeighting` code. Writes the rule
// value to `out_value` and, when non-`NULL`, the plain interpolatory value
// to `out_interp`.
//
// # Safety
//
// `mu` and `cfg` must be live handles; `out_value` valid for one
// `CqComplex`; `out_interp` `NULL` or valid for one `CqComplex`.
enum CqStatus cq_mixed_rule_apply(const struct CqMeasure *mu,
                                  const struct CqNodeConfig *cfg,
                                  int32_t integrand,
                                  size_t r,
                                  int64_t p,
                                  int64_t p_tilde,
                                  int32_t weighting,
                                  struct CqComplex *out_value,
                                  struct CqComplex *out_interp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCLEQUAD_H */
