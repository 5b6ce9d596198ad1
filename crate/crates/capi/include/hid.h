/* C ABI for the harmonic-identity verification engine. */

#ifndef HID_H
#define HID_H

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every API call.
typedef enum HidStatus {
  HidOk = 0,
  HidNullPointer = 1,
  HidInvalidUtf8 = 2,
  HidBadJson = 3,
  HidUnknownIdentity = 4,
  HidBadParams = 5,
  HidInternalError = 6,
} HidStatus;

// Opaque verification engine (registry plus evaluators).
typedef struct HidEngine HidEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an engine. Never fails; release with [`hid_engine_free`].
struct HidEngine *hid_engine_new(void);

// Releases an engine created by [`hid_engine_new`]. NULL is a no-op.
//
// # Safety
// `engine` must be NULL or a pointer obtained from [`hid_engine_new`] that
// has not already been freed.
void hid_engine_free(struct HidEngine *engine);

// Releases a string returned through an out-pointer. NULL is a no-op.
//
// # Safety
// `text` must be NULL or a pointer this library wrote into an out-pointer,
// not yet freed.
void hid_string_free(char *text);

// Writes a JSON array describing every registry entry (id, parameter
// schema, constraints, anchor, kind) into `out_json`.
//
// # Safety
// `engine` must come from [`hid_engine_new`]; `out_json` must be a valid
// pointer to writable storage.
enum HidStatus hid_list_identities(const struct HidEngine *engine, char **out_json);

// Evaluates identity `id` at the parameters given as a JSON object mapping
// parameter names to values (strings in the `p/q` form, or plain JSON
// integers for the integer-kind parameters). Writes a JSON object with the
// exact `lhs`, `rhs`, and `verdict`.
//
// # Safety
// Pointer arguments must be valid; `id` and `params_json` must be
// NUL-terminated UTF-8.
enum HidStatus hid_eval(const struct HidEngine *engine,
                        const char *id,
                        const char *params_json,
                        char **out_json);

// Runs a verification sweep described by a JSON [`SweepConfig`]:
//
// ```json
// {"identity_ids": "all", "samples_per_identity": 200, "seed": 42,
//  "max_n": 6, "rational_height_bound": 12}
// ```
//
// Missing fields take their defaults. Writes the full verification report
// as JSON. A sweep with failures still returns `HidOk`; inspect the report.
//
// # Safety
// Pointer arguments must be valid; `config_json` must be NUL-terminated
// UTF-8.
enum HidStatus hid_verify(const struct HidEngine *engine, const char *config_json, char **out_json);

// Certifies the derivative relations and the theorem-to-theorem derivative
// transport. `config_json` is a JSON [`ChainConfig`]; `{}` takes every
// default. Writes the verification report as JSON.
//
// # Safety
// Pointer arguments must be valid; `config_json` must be NUL-terminated
// UTF-8.
enum HidStatus hid_chain(const struct HidEngine *engine, const char *config_json, char **out_json);

// Certifies the pre-limit-to-theorem limit extractions. `config_json` is a
// JSON [`LimitConfig`]; `{}` takes every default.
//
// # Safety
// Pointer arguments must be valid; `config_json` must be NUL-terminated
// UTF-8.
enum HidStatus hid_limits(const char *config_json, char **out_json);

// Runs random product-rule instances. `config_json` is a JSON
// [`LemmaConfig`]; `{}` takes every default.
//
// # Safety
// Pointer arguments must be valid; `config_json` must be NUL-terminated
// UTF-8.
enum HidStatus hid_lemma(const char *config_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HID_H */
