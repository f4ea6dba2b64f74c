#ifndef ALGCIC_H
#define ALGCIC_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Allow products into Set over any domain.
 */
#define ALG_FLAG_IMPREDICATIVE_SET 1

/**
 * Dependent elimination for co-inductive families.
 */
#define ALG_FLAG_COFIX_DEP_ELIM 2

/**
 * Refuse properly indexed families in Prop over an index in Type.
 */
#define ALG_FLAG_NO_SINGLETON_PROPER_INDEX 4

/**
 * Turn off η in conversion.
 */
#define ALG_FLAG_NO_ETA 8

typedef enum AlgStatus {
  ALG_STATUS_OK = 0,
  ALG_STATUS_NULL_ARGUMENT = 1,
  ALG_STATUS_INVALID_UTF8 = 2,
  ALG_STATUS_IO = 3,
  ALG_STATUS_PARSE = 4,
  ALG_STATUS_SCOPE = 5,
  ALG_STATUS_TYPE = 6,
  ALG_STATUS_NOT_FOUND = 7,
  ALG_STATUS_FUEL_EXHAUSTED = 8,
  ALG_STATUS_PANIC = 9,
} AlgStatus;

/**
 * Opaque checking session.
 */
typedef struct AlgSession AlgSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session. `flags` is a bitwise or of `ALG_FLAG_*`; flags set
 * here cannot be changed by `#flag` pragmas. `fuel` bounds reduction per
 * definition, 0 for the default. Returns NULL on unknown flag bits.
 */
struct AlgSession *alg_session_new(uint32_t flags, uint64_t fuel);

/**
 * Releases a session. NULL is ignored.
 *
 * # Safety
 * `session` must come from [`alg_session_new`] and not be used afterwards.
 */
void alg_session_free(struct AlgSession *session);

/**
 * Loads and checks a source file, adding its definitions to the session.
 *
 * # Safety
 * `session` must be a live handle and `path` a NUL-terminated string.
 */
enum AlgStatus alg_session_load_file(struct AlgSession *session, const char *path);

/**
 * Checks source text. `name` labels it in error messages; `#require`
 * paths resolve against the working directory.
 *
 * # Safety
 * `session` must be a live handle; `source` and `name` NUL-terminated.
 */
enum AlgStatus alg_session_load_source(struct AlgSession *session,
                                       const char *source,
                                       const char *name);

/**
 * Writes the type of definition `name` to `*out`.
 *
 * # Safety
 * `session` must be a live handle, `name` NUL-terminated and `out` valid
 * for one pointer write.
 */
enum AlgStatus alg_session_type_of(struct AlgSession *session, const char *name, char **out);

/**
 * Writes the normal form of definition `name` to `*out`.
 *
 * # Safety
 * As for [`alg_session_type_of`].
 */
enum AlgStatus alg_session_eval(struct AlgSession *session, const char *name, char **out);

/**
 * Number of definitions in the session, 0 for NULL.
 *
 * # Safety
 * `session` must be NULL or a live handle.
 */
size_t alg_session_len(const struct AlgSession *session);

/**
 * Message of the last failure, or NULL. Valid until the next call on the
 * session.
 *
 * # Safety
 * `session` must be NULL or a live handle.
 */
const char *alg_session_last_error(const struct AlgSession *session);

/**
 * Error kind of the last failure, such as `GuardViolation`, or NULL.
 *
 * # Safety
 * `session` must be NULL or a live handle.
 */
const char *alg_session_last_error_kind(const struct AlgSession *session);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void alg_string_free(char *s);

/**
 * Static name of a status code.
 */
const char *alg_status_name(enum AlgStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALGCIC_H */
