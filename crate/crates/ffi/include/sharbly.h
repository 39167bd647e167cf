#ifndef SHARBLY_H
#define SHARBLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum ShStatus {
  SH_STATUS_OK = 0,
  // The computation ran and the answer is negative (e.g. a certificate
  // failed its check).
  SH_STATUS_INVALID = 1,
  SH_STATUS_INVALID_INPUT = 2,
  SH_STATUS_BUDGET_EXCEEDED = 3,
  SH_STATUS_UNSUPPORTED_RANK = 4,
  SH_STATUS_NULL_POINTER = 5,
  SH_STATUS_INTERNAL = 6,
} ShStatus;

// A sharbly cycle with per-term provenance.
typedef struct ShCycle ShCycle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. Owned by the library;
// valid until the next call.
const char *sh_last_error(void);

// Library version as a static string.
const char *sh_version(void);

void sh_string_free(char *s);

// Builds the cycle for rank `n` (2, 3 or 4).
enum ShStatus sh_cycle_build(uint32_t n, struct ShCycle **out);

// Parses a cycle from the JSON written by `cycle build`.
enum ShStatus sh_cycle_from_json(const char *json, struct ShCycle **out);

enum ShStatus sh_cycle_to_json(const struct ShCycle *c, char **out);

// Number of weighted terms; 0 for a null handle.
size_t sh_cycle_len(const struct ShCycle *c);

void sh_cycle_free(struct ShCycle *c);

// Boundary certificate for `c`. `budget_nodes = 0` means no limit.
// `valid` receives the verdict; `cert_json`, if not null, receives the
// certificate file. Returns `SH_STATUS_INVALID` when the boundary does not
// vanish.
enum ShStatus sh_cycle_verify(const struct ShCycle *c,
                              uint64_t budget_nodes,
                              bool *valid,
                              char **cert_json);

// Checks a certificate file offline.
enum ShStatus sh_cert_check(const char *json, bool *valid);

// Flipon test for `count` vectors of length `n`, stored row after row.
enum ShStatus sh_is_flipon(const int64_t *data, size_t count, size_t n, bool *out);

// Canonical form of a basic sharbly. Writes the canonical vectors to
// `out_data` (room for `count * n` entries) and the sign to `out_sign`;
// the sign is 0 when the basic vanishes.
enum ShStatus sh_canonicalize(const int64_t *data,
                              size_t count,
                              size_t n,
                              int64_t *out_data,
                              int32_t *out_sign);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHARBLY_H */
