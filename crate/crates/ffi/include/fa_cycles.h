#ifndef FA_CYCLES_H
#define FA_CYCLES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FacStatus {
  FAC_STATUS_OK = 0,
  FAC_STATUS_NULL_POINTER = 1,
  FAC_STATUS_INVALID_UTF8 = 2,
  FAC_STATUS_INVALID_CHAIN = 3,
  FAC_STATUS_INVALID_MEASURE = 4,
  FAC_STATUS_INVALID_SET = 5,
  FAC_STATUS_KERNEL_ERROR = 6,
  FAC_STATUS_MEASURE_ERROR = 7,
  FAC_STATUS_CYCLE_ERROR = 8,
  FAC_STATUS_UNKNOWN_BUNDLE = 9,
  FAC_STATUS_PANIC = 10,
} FacStatus;

/**
 * A loaded chain file.
 */
typedef struct FacChain FacChain;

/**
 * A finite combination of atoms and one-sided germs.
 */
typedef struct FacMeasure FacMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Free with `fac_string_free`.
 */
char *fac_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void fac_string_free(char *s);

/**
 * Parses a chain file from TOML text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `out` must be writable.
 */
enum FacStatus fac_chain_from_toml(const char *toml, struct FacChain **out);

/**
 * Loads one of the chains shipped with the library.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum FacStatus fac_chain_bundled(const char *name, struct FacChain **out);

/**
 * # Safety
 * `chain` must be NULL or a handle from this library, not yet freed.
 */
void fac_chain_free(struct FacChain *chain);

/**
 * Writes `A^n mu` to `out`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FacStatus fac_chain_apply(const struct FacChain *chain,
                               const struct FacMeasure *mu,
                               uintptr_t n,
                               struct FacMeasure **out);

/**
 * All cycles of period at most `max_period`, as a JSON array.
 *
 * # Safety
 * `chain` must be live; `out` must be writable.
 */
enum FacStatus fac_chain_cycles_json(const struct FacChain *chain,
                                     uintptr_t max_period,
                                     char **out);

/**
 * Parses a measure written like `1/2*delta(1) + 1/2*germ(0+)`.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum FacStatus fac_measure_parse(const char *src, struct FacMeasure **out);

/**
 * Parses a measure from its JSON wire form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FacStatus fac_measure_from_json(const char *json, struct FacMeasure **out);

/**
 * # Safety
 * `mu` must be live; `out` must be writable.
 */
enum FacStatus fac_measure_to_json(const struct FacMeasure *mu, char **out);

/**
 * # Safety
 * `mu` must be live; `out` must be writable.
 */
enum FacStatus fac_measure_to_string(const struct FacMeasure *mu, char **out);

/**
 * # Safety
 * `mu` must be NULL or a handle from this library, not yet freed.
 */
void fac_measure_free(struct FacMeasure *mu);

/**
 * Mass of `set` (e.g. `"(0,1) U {2}"`) as exact `p/q` text.
 *
 * # Safety
 * `mu` must be live; `set` NUL-terminated; `out` writable.
 */
enum FacStatus fac_measure_evaluate(const struct FacMeasure *mu, const char *set, char **out);

/**
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FacStatus fac_measure_meet(const struct FacMeasure *a,
                                const struct FacMeasure *b,
                                struct FacMeasure **out);

/**
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FacStatus fac_measure_join(const struct FacMeasure *a,
                                const struct FacMeasure *b,
                                struct FacMeasure **out);

/**
 * Splits `mu` into its countably additive and purely finitely additive parts.
 *
 * # Safety
 * `mu` must be live; both out parameters must be writable.
 */
enum FacStatus fac_measure_split(const struct FacMeasure *mu,
                                 struct FacMeasure **out_ca,
                                 struct FacMeasure **out_pfa);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FA_CYCLES_H */
