#ifndef OVP_H
#define OVP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum OvpStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  OVP_STATUS_OK = 0,
  OVP_STATUS_NULL_ARGUMENT = 1,
  OVP_STATUS_INVALID_UTF8 = 2,
  OVP_STATUS_INVALID_JSON = 3,
  /*
   Well-formed input the engine rejects: unknown lexemes, incomplete or
   contradictory selections, empty rankings.
   */
  OVP_STATUS_INVALID_INPUT = 4,
  OVP_STATUS_IO = 5,
  /*
   A Rust panic was caught at the boundary.
   */
  OVP_STATUS_INTERNAL = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OvpStatus OvpStatus;
#else
typedef int32_t OvpStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/*
 Opaque engine handle owning a lexicon.
 */
typedef struct OvpEngine OvpEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Engine over the built-in lexicon. Never null.
 */
struct OvpEngine *ovp_engine_new(void);

/*
 Engine over a lexicon TOML file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
OvpStatus ovp_engine_from_lexicon_path(const char *path, struct OvpEngine **out);

/*
 # Safety
 `engine` must come from this library and not be used afterwards. Null is
 ignored.
 */
void ovp_engine_free(struct OvpEngine *engine);

/*
 Renders complete selections to the OVP surface string.

 # Safety
 Pointer arguments must be valid; `selections_json` NUL-terminated.
 */
OvpStatus ovp_render(const struct OvpEngine *engine,
                     const char *selections_json,
                     char **out_surface);

/*
 Writes the verdict as `{"status": "complete" | "incomplete" | "invalid",
 "details": [...]}`.

 # Safety
 As for [`ovp_render`].
 */
OvpStatus ovp_validate(const struct OvpEngine *engine,
                       const char *selections_json,
                       char **out_json);

/*
 Writes the offered lexemes for every slot as a JSON array.

 # Safety
 As for [`ovp_render`].
 */
OvpStatus ovp_options(const struct OvpEngine *engine, const char *selections_json, char **out_json);

/*
 Fills `slot` (e.g. `"object_suffix"`) with lexeme `id`; writes
 `{"selections": ..., "cleared": [...]}`.

 # Safety
 As for [`ovp_render`]; `slot` and `id` NUL-terminated.
 */
OvpStatus ovp_apply_choice(const struct OvpEngine *engine,
                           const char *selections_json,
                           const char *slot,
                           const char *id,
                           char **out_json);

/*
 Writes the seeded random sentence's selections.

 # Safety
 `engine` and `out_json` must be valid.
 */
OvpStatus ovp_random(const struct OvpEngine *engine, uint64_t seed, char **out_json);

/*
 Writes the English-only structured form of complete selections.

 # Safety
 As for [`ovp_render`].
 */
OvpStatus ovp_encode(const struct OvpEngine *engine,
                     const char *selections_json,
                     bool ti_as_past_continuous,
                     char **out_json);

/*
 Extrapolated rank-biased overlap of two rankings of item ids.

 # Safety
 `a` and `b` must point to `a_len` / `b_len` readable elements.
 */
OvpStatus ovp_rbo(const uint64_t *a,
                  size_t a_len,
                  const uint64_t *b,
                  size_t b_len,
                  double p,
                  double *out);

/*
 Mean absolute rank difference of the items of `target` in `computed`.

 # Safety
 As for [`ovp_rbo`]; both arrays have length `len`.
 */
OvpStatus ovp_average_displacement(const uint64_t *target,
                                   const uint64_t *computed,
                                   size_t len,
                                   double *out);

/*
 Cosine similarity mapped onto [0, 1].

 # Safety
 `a` and `b` must point to `len` readable doubles.
 */
OvpStatus ovp_normalized_cosine(const double *a, const double *b, size_t len, double *out);

/*
 Message for the last failed call on this thread, or null after a
 success. Valid until the next call on this thread.
 */
const char *ovp_last_error(void);

/*
 # Safety
 `s` must come from this library and not be freed twice. Null is ignored.
 */
void ovp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OVP_H */
