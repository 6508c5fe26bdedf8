#ifndef KCONTACT_H
#define KCONTACT_H

#include <stddef.h>
#include <stdint.h>

// Status codes; 0 to 5 coincide with the command-line exit codes.
typedef enum KcStatus {
  KC_STATUS_OK = 0,
  // The check ran and its verdict is FAIL.
  KC_STATUS_FAIL = 1,
  KC_STATUS_CONFIG = 2,
  KC_STATUS_CONTRACT = 3,
  KC_STATUS_DIVERGENCE = 4,
  KC_STATUS_INTEGRABILITY = 5,
  KC_STATUS_NULL_POINTER = 10,
  KC_STATUS_INVALID_UTF8 = 11,
  KC_STATUS_BUFFER_TOO_SMALL = 12,
  KC_STATUS_PANIC = 13,
} KcStatus;

// Check mode.
typedef enum KcMode {
  KC_MODE_STANDARD = 0,
  KC_MODE_EVOLUTION = 1,
} KcMode;

// A corpus example with its current parameter overrides.
typedef struct KcExample KcExample;

// A finished check or simulation: verdict, exit code and JSON report.
typedef struct KcReport KcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes (without the terminator) of the last error message; copies
// it into `buf` when `buf` holds at least that many bytes plus one.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t kc_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *kc_version(void);

// Load example `name` into `*out`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum KcStatus kc_example_load(const char *name, struct KcExample **out);

// Release an example handle; null is ignored.
//
// # Safety
// `ex` must come from [`kc_example_load`] and not be used afterwards.
void kc_example_free(struct KcExample *ex);

// Chart sizes of the example.
//
// # Safety
// All pointers must be valid.
enum KcStatus kc_example_chart(const struct KcExample *ex, size_t *n, size_t *k);

// Override a parameter; unknown names are rejected with `Config`.
//
// # Safety
// `ex` must be a valid handle and `name` a NUL-terminated string.
enum KcStatus kc_example_set_param(struct KcExample *ex, const char *name, double value);

// Current value of a parameter.
//
// # Safety
// `ex` must be a valid handle, `name` a NUL-terminated string, `out` valid.
enum KcStatus kc_example_get_param(const struct KcExample *ex, const char *name, double *out);

// Hamiltonian value at the flat point `x` of length `len`.
//
// # Safety
// `x` must point to `len` doubles and `out` be valid.
enum KcStatus kc_hamiltonian_value(const struct KcExample *ex,
                                   const double *x,
                                   size_t len,
                                   double *out);

// Gradient of the Hamiltonian at `x`, written in flat layout to `out`
// (`out_len` must be at least `len`).
//
// # Safety
// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
enum KcStatus kc_hamiltonian_grad(const struct KcExample *ex,
                                  const double *x,
                                  size_t len,
                                  double *out,
                                  size_t out_len);

// Canonical k-vector field at `x`: k consecutive tangent vectors in flat layout,
// `k * len` doubles in total.
//
// # Safety
// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
enum KcStatus kc_canonical_field(const struct KcExample *ex,
                                 enum KcMode mode,
                                 const double *x,
                                 size_t len,
                                 double *out,
                                 size_t out_len);

// Hamilton-Jacobi check of `section`; a report is produced whenever the check
// runs, including FAIL verdicts (status `Fail` or `Contract`).
//
// # Safety
// `ex` must be valid, `section` NUL-terminated and `out` a valid pointer.
enum KcStatus kc_check_hj(const struct KcExample *ex,
                          const char *section,
                          enum KcMode mode,
                          uint64_t seed,
                          struct KcReport **out);

// Simulate reference `solution`, optionally through `section` (null for none).
//
// # Safety
// `ex` must be valid, strings NUL-terminated or null (`section` only), `out` valid.
enum KcStatus kc_simulate(const struct KcExample *ex,
                          const char *solution,
                          const char *section,
                          enum KcMode mode,
                          uint64_t seed,
                          struct KcReport **out);

// Exit code the command line would return for this report.
//
// # Safety
// `r` must be a valid report handle.
int32_t kc_report_exit_code(const struct KcReport *r);

// 1 when the verdict is PASS, 0 otherwise.
//
// # Safety
// `r` must be a valid report handle.
int32_t kc_report_passed(const struct KcReport *r);

// JSON text of the report, owned by the handle.
//
// # Safety
// `r` must be a valid report handle; the string dies with it.
const char *kc_report_json(const struct KcReport *r);

// Release a report; null is ignored.
//
// # Safety
// `r` must come from this library and not be used afterwards.
void kc_report_free(struct KcReport *r);

// Gauge-kernel dimension (n+1)(k^2-1) and the smallest and largest numeric
// kernel dimensions over `points` random points.
//
// # Safety
// Output pointers must be valid.
enum KcStatus kc_gauge_dimension(size_t n,
                                 size_t k,
                                 size_t points,
                                 uint64_t seed,
                                 size_t *analytic,
                                 size_t *numeric_min,
                                 size_t *numeric_max);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCONTACT_H */
