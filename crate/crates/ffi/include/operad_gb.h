#ifndef OPERAD_GB_H
#define OPERAD_GB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OgbStatus {
  OGB_STATUS_OK = 0,
  // The identity does not hold, or its τ-image is nonzero.
  OGB_STATUS_FAILS = 1,
  // Bad input: unknown name, parse error, arity mismatch.
  OGB_STATUS_USER_ERROR = 2,
  // A requested arity exceeds the cap.
  OGB_STATUS_RESOURCE_CAP = 3,
  OGB_STATUS_NULL_POINTER = 4,
  OGB_STATUS_INVALID_UTF8 = 5,
  OGB_STATUS_PANIC = 6,
} OgbStatus;

// A completed basis together with its presentation and encoding.
typedef struct OgbBasis OgbBasis;

// A parsed presentation.
typedef struct OgbPresentation OgbPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library.
const char *ogb_last_error(void);

// Loads a built-in presentation (`novikov`, `gd`, `com-gd`, `tp`, `lie`,
// `com`, `as`).
//
// # Safety
// `name` must be a valid C string and `out` a valid pointer.
enum OgbStatus ogb_presentation_builtin(const char *name, struct OgbPresentation **out);

// Parses a presentation in the `.opd` format.
//
// # Safety
// `text` must be a valid C string and `out` a valid pointer.
enum OgbStatus ogb_presentation_parse(const char *text, struct OgbPresentation **out);

// # Safety
// `p` must come from this library and not be used afterwards.
void ogb_presentation_free(struct OgbPresentation *p);

// Completes a presentation through `max_arity` (at most 7).
//
// # Safety
// `p` must be a live presentation and `out` a valid pointer.
enum OgbStatus ogb_complete(const struct OgbPresentation *p,
                            size_t max_arity,
                            size_t workers,
                            struct OgbBasis **out);

// # Safety
// `b` must come from this library and not be used afterwards.
void ogb_basis_free(struct OgbBasis *b);

// # Safety
// `b` must be a live basis and `out` a valid pointer.
enum OgbStatus ogb_basis_rule_count(const struct OgbBasis *b, size_t *out);

// Writes `dim P(n)` for `n = 1..` into `dims`, at most `len` entries and
// at most the certified arity; `written` receives the count.
//
// # Safety
// `dims` must hold `len` entries; `written` must be valid.
enum OgbStatus ogb_basis_dims(const struct OgbBasis *b, size_t *dims, size_t len, size_t *written);

// The basis artifact as JSON; release with [`ogb_string_free`].
//
// # Safety
// `b` must be a live basis and `out` a valid pointer.
enum OgbStatus ogb_basis_json(const struct OgbBasis *b, char **out);

// # Safety
// `s` must come from this library and not be used afterwards.
void ogb_string_free(char *s);

// Checks an identity of the presentation or the library against the
// basis. Returns `Ok` if it holds and `Fails` otherwise; the certificate
// is replayed before answering.
//
// # Safety
// `b` must be a live basis and `identity` a valid C string.
enum OgbStatus ogb_verify(const struct OgbBasis *b, const char *identity);

// Sets `zero` to 1 if the library identity vanishes under τ, else 0.
//
// # Safety
// `identity` must be a valid C string and `zero` a valid pointer.
enum OgbStatus ogb_tau_is_zero(const char *identity, int *zero);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPERAD_GB_H */
