#ifndef CLIFFSOLVE_H
#define CLIFFSOLVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_ARGUMENT = 2,
  CS_STATUS_PARSE = 3,
  CS_STATUS_SIGNATURE_MISMATCH = 4,
  CS_STATUS_NOT_LORENTZIAN = 5,
  CS_STATUS_CONFIG = 6,
  CS_STATUS_FAILED = 7,
  CS_STATUS_PANIC = 8,
} CsStatus;

// Opaque multivector handle.
typedef struct CsMultivector CsMultivector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty if none. Valid until
// the next call on this thread.
const char *cs_last_error(void);

// Library version as a static string.
const char *cs_version(void);

// # Safety
// `s` must be null or a string returned by this library.
void cs_string_free(char *s);

// Zero multivector of `C ⊗ Cl(r,s)`.
//
// # Safety
// `out` must be a valid pointer.
enum CsStatus cs_multivector_new(size_t r, size_t s, struct CsMultivector **out);

// Parses text such as `"0.5*e + 0.5*e^1 - 2i*e^23"`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CsStatus cs_multivector_parse(size_t r,
                                   size_t s,
                                   const char *text_in,
                                   struct CsMultivector **out);

// # Safety
// `mv` must be null or a handle from this library, not yet freed.
void cs_multivector_free(struct CsMultivector *mv);

// Number of blade coefficients `2^n`, or 0 for a null handle.
//
// # Safety
// `mv` must be null or a live handle.
size_t cs_multivector_len(const struct CsMultivector *mv);

// Coefficient of the blade with bitmask `mask` (bit `a−1` set for `e^a`).
//
// # Safety
// `mv` must be a live handle; `re` and `im` valid pointers.
enum CsStatus cs_multivector_get(const struct CsMultivector *mv,
                                 size_t mask,
                                 double *re,
                                 double *im);

// # Safety
// `mv` must be a live handle.
enum CsStatus cs_multivector_set(struct CsMultivector *mv, size_t mask, double re, double im);

// Geometric product `a b` into a new handle.
//
// # Safety
// `a`, `b` live handles; `out` a valid pointer.
enum CsStatus cs_multivector_product(const struct CsMultivector *a,
                                     const struct CsMultivector *b,
                                     struct CsMultivector **out);

// Wedge product `a ∧ b`.
//
// # Safety
// As for [`cs_multivector_product`].
enum CsStatus cs_multivector_wedge(const struct CsMultivector *a,
                                   const struct CsMultivector *b,
                                   struct CsMultivector **out);

// # Safety
// As for [`cs_multivector_product`].
enum CsStatus cs_multivector_add(const struct CsMultivector *a,
                                 const struct CsMultivector *b,
                                 struct CsMultivector **out);

// # Safety
// `a` a live handle; `out` a valid pointer.
enum CsStatus cs_multivector_reverse(const struct CsMultivector *a, struct CsMultivector **out);

// Complex conjugation of the coefficients.
//
// # Safety
// `a` a live handle; `out` a valid pointer.
enum CsStatus cs_multivector_conjugate(const struct CsMultivector *a, struct CsMultivector **out);

// `U† = e¹ Ū~ e¹`; signature `(1, n−1)` only.
//
// # Safety
// `a` a live handle; `out` a valid pointer.
enum CsStatus cs_multivector_hermitian(const struct CsMultivector *a, struct CsMultivector **out);

// Text form; free with [`cs_string_free`]. Null for a null handle.
//
// # Safety
// `mv` must be null or a live handle.
char *cs_multivector_to_string(const struct CsMultivector *mv);

// Residuals `‖t² − t‖∞`, `‖t† − t‖∞` and whether both are within 1e−13.
//
// # Safety
// `t` a live handle; output pointers valid.
enum CsStatus cs_idempotent_check(const struct CsMultivector *t,
                                  double *square_residual,
                                  double *hermitian_residual,
                                  bool *is_idempotent);

// Runs a CLI command (`"validate"`, `"idempotents"`, `"solve"`,
// `"theorem"`, `"dispersion"`, `"energy"`) with a TOML configuration
// (null for defaults). Artifacts go to `out_dir` (null: `cliffsolve-out`).
// `seed` overrides the configured seed when `use_seed` is true.
//
// `*report_json` receives the JSON report (free with [`cs_string_free`])
// and `*exit_code` the CLI exit status (0 pass, 1 config error, 2 check
// failure). The return value is `Ok` whenever a report was produced.
//
// # Safety
// String arguments must be null or NUL-terminated; output pointers valid.
enum CsStatus cs_run(const char *command,
                     const char *config_toml,
                     const char *out_dir,
                     bool use_seed,
                     uint64_t seed,
                     char **report_json,
                     int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLIFFSOLVE_H */
