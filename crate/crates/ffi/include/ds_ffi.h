#ifndef DS_FFI_H
#define DS_FFI_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_INVALID_UTF8 = 2,
  DS_STATUS_CONFIG = 3,
  DS_STATUS_PARSE = 4,
  DS_STATUS_PRECONDITION = 5,
  DS_STATUS_BOUND = 6,
  DS_STATUS_MATH = 7,
  DS_STATUS_CHECK_FAILED = 8,
  DS_STATUS_PANIC = 9,
} DsStatus;

// Opaque handle to a central division algebra `D = (F_q^d(T)/F_q(T), σ, r)` with its order.
typedef struct DsAlgebra DsAlgebra;

// Opaque handle to a module over a finite field.
typedef struct DsModule DsModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *ds_last_error_message(void);

// # Safety
// `s` must come from this library or be null.
void ds_string_free(char *s);

// Build the algebra for `q`, `d` and `r` (e.g. `"T^2+2"`).
//
// # Safety
// `r` must be a NUL-terminated string, `out` a valid pointer.
enum DsStatus ds_algebra_new(uint64_t q, uint32_t d, const char *r, struct DsAlgebra **out);

// # Safety
// `a` must come from [`ds_algebra_new`] or be null.
void ds_algebra_free(struct DsAlgebra *a);

// Local invariants as a JSON object `{"place": "k/d", ...}`.
//
// # Safety
// `a` must be a live handle, `out` a valid pointer.
enum DsStatus ds_algebra_invariants_json(const struct DsAlgebra *a, char **out);

// # Safety
// `a` must be a live handle, `out` a valid pointer.
enum DsStatus ds_algebra_is_maximal(const struct DsAlgebra *a, bool *out);

// log_q of the index `#(O_D / b O_D)` for `b` written in `T`, `h`, `z`.
//
// # Safety
// `a` must be a live handle, `b` a NUL-terminated string, `out` a valid pointer.
enum DsStatus ds_algebra_order_index_exp(const struct DsAlgebra *a, const char *b, uint64_t *out);

// The standard module over `L = F_q^m` with `T ↦ gamma` (a field element encoding).
//
// # Safety
// `a` must be a live handle, `out` a valid pointer.
enum DsStatus ds_module_new_standard(const struct DsAlgebra *a,
                                     uint32_t m,
                                     uint64_t gamma,
                                     struct DsModule **out);

// The standard module in A-characteristic `p` (a prime of A, e.g. `"T^2+1"`).
//
// # Safety
// `a` must be a live handle, `p` a NUL-terminated string, `out` a valid pointer.
enum DsStatus ds_module_new_at_prime(const struct DsAlgebra *a,
                                     const char *p,
                                     struct DsModule **out);

// # Safety
// `m` must come from a module constructor or be null.
void ds_module_free(struct DsModule *m);

// Run the checks and write them as a JSON array. Returns `CheckFailed` (with the JSON
// still written) if any check fails.
//
// # Safety
// `m` must be a live handle, `out` a valid pointer.
enum DsStatus ds_module_verify_json(const struct DsModule *m,
                                    uint32_t samples,
                                    uint32_t deg,
                                    uint64_t seed,
                                    char **out);

// log_q of the order of the kernel group scheme of `φ_b`.
//
// # Safety
// `m` must be a live handle, `b` a NUL-terminated string, `out` a valid pointer.
enum DsStatus ds_module_scheme_order_exp(const struct DsModule *m, const char *b, uint64_t *out);

// Run a command on a JSON configuration and write the JSON report.
// `command` is one of `construct`, `verify`, `invariants`, `maximal`, `supersingular`, `endring`.
// Returns `CheckFailed` (with the report written) when the report does not pass.
//
// # Safety
// `command` and `config_json` must be NUL-terminated strings, `out` a valid pointer.
enum DsStatus ds_run_json(const char *command, const char *config_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DS_FFI_H */
