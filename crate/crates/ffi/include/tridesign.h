#ifndef TRIDESIGN_H
#define TRIDESIGN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_ARGUMENT = 2,
  TD_STATUS_UNSUPPORTED = 3,
  TD_STATUS_PRECONDITION = 4,
  TD_STATUS_UNKNOWN_DATASET = 5,
  TD_STATUS_EXTERNAL_DATASET = 6,
  TD_STATUS_PARSE = 7,
  TD_STATUS_IO = 8,
  TD_STATUS_INVALID_CERTIFICATE = 9,
  TD_STATUS_SEARCH_FAILED = 10,
  TD_STATUS_CONSTRUCTION_FAILED = 11,
  TD_STATUS_OUT_OF_RANGE = 12,
  TD_STATUS_PANIC = 13,
} TdStatus;

/**
 * A design or GDD held in memory.
 */
typedef struct TdDesign TdDesign;

/**
 * A finite field `GF(2^n)` with its log and Zech tables.
 */
typedef struct TdField TdField;

typedef struct TdVerifyReport {
  bool ok;
  bool is_gdd;
  uint32_t n;
  uint32_t m;
  uint64_t triangle_count;
  uint64_t lines_total;
  uint64_t group_lines;
  uint64_t lines_covered;
  /**
   * Witness counts; the lists themselves are bounded.
   */
  uint64_t uncovered;
  uint64_t multiply_covered;
  uint64_t group_lines_covered;
} TdVerifyReport;

typedef struct TdBalanceReport {
  bool balanced;
  /**
   * Common coverage, 0 when unbalanced.
   */
  uint64_t lambda;
} TdBalanceReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *td_last_error(void);

/**
 * Static description of a status code.
 */
const char *td_status_str(enum TdStatus s);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void td_string_free(char *s);

/**
 * Builds `GF(2^n)`; `poly` 0 selects the default primitive polynomial.
 *
 * # Safety
 * `out` must be writable.
 */
enum TdStatus td_field_new(uint32_t n, uint32_t poly, struct TdField **out);

/**
 * # Safety
 * `f` must come from [`td_field_new`] and not have been freed.
 */
void td_field_free(struct TdField *f);

/**
 * Reduction polynomial, including the `x^n` bit; 0 for a null handle.
 *
 * # Safety
 * `f` must be a live field handle or null.
 */
uint32_t td_field_poly(const struct TdField *f);

/**
 * Zech logarithm `z(k)` with `xi^z(k) = 1 + xi^k`.
 *
 * # Safety
 * `f` must be a live field handle; `out` must be writable.
 */
enum TdStatus td_field_zech(const struct TdField *f, int64_t k, uint32_t *out);

/**
 * Discrete logarithm of a nonzero element.
 *
 * # Safety
 * `f` must be a live field handle; `out` must be writable.
 */
enum TdStatus td_field_log(const struct TdField *f, uint32_t x, uint32_t *out);

/**
 * Element `xi^k` as a bit vector.
 *
 * # Safety
 * `f` must be a live field handle; `out` must be writable.
 */
enum TdStatus td_field_exp(const struct TdField *f, int64_t k, uint32_t *out);

/**
 * Gamma set of `k`: writes its distinct residues to `out` (room for 6) and
 * their number to `len`.
 *
 * # Safety
 * `f` must be a live field handle; `out` must hold 6 values; `len` must be
 * writable.
 */
enum TdStatus td_gamma(const struct TdField *f, int64_t k, uint32_t *out, size_t *len);

/**
 * Expands an embedded dataset (`design6`, `gdd6-2`, `gdd12-6`, `frob7`,
 * `frob13`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum TdStatus td_dataset_expand(const char *name, struct TdDesign **out);

/**
 * Expands a certificate in JSON form under the Singer cycle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TdStatus td_cert_expand(const char *json, bool with_groups, struct TdDesign **out);

/**
 * Reads a design file, gzip or plain.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum TdStatus td_design_load(const char *path, struct TdDesign **out);

/**
 * Writes a design file; names ending in `.gz` are compressed.
 *
 * # Safety
 * `d` must be a live design handle; `path` must be a NUL-terminated string.
 */
enum TdStatus td_design_save(const struct TdDesign *d, const char *path);

/**
 * # Safety
 * `d` must come from this library and not have been freed.
 */
void td_design_free(struct TdDesign *d);

/**
 * Dimension `n` of the ambient space; 0 for a null handle.
 *
 * # Safety
 * `d` must be a live design handle or null.
 */
uint32_t td_design_n(const struct TdDesign *d);

/**
 * Number of triangles; 0 for a null handle.
 *
 * # Safety
 * `d` must be a live design handle or null.
 */
uint64_t td_design_triangle_count(const struct TdDesign *d);

/**
 * Corners of triangle `i`, ascending.
 *
 * # Safety
 * `d` must be a live design handle; `out` must hold 3 values.
 */
enum TdStatus td_design_triangle(const struct TdDesign *d, uint64_t i, uint32_t *out);

/**
 * Checks that every non-group line lies in exactly one triangle.
 *
 * # Safety
 * `d` must be a live design handle; `out` must be writable.
 */
enum TdStatus td_design_verify(const struct TdDesign *d, struct TdVerifyReport *out);

/**
 * Checks that every nonzero vector lies in the same number of triangles.
 *
 * # Safety
 * `d` must be a live design handle; `out` must be writable.
 */
enum TdStatus td_design_balance(const struct TdDesign *d, struct TdBalanceReport *out);

/**
 * Searches for a Singer-invariant `(n, m)` certificate and returns it as
 * JSON; free it with [`td_string_free`]. `node_limit` 0 means unlimited.
 *
 * # Safety
 * `out_json` must be writable.
 */
enum TdStatus td_search_singer(uint32_t n,
                               uint32_t m,
                               uint64_t seed,
                               bool use_seed,
                               uint64_t node_limit,
                               char **out_json);

/**
 * Searches for a Frobenius-invariant certificate on `F_(2^n)`.
 *
 * # Safety
 * `out_json` must be writable.
 */
enum TdStatus td_search_frobenius(uint32_t n,
                                  uint64_t seed,
                                  bool use_seed,
                                  uint64_t node_limit,
                                  char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIDESIGN_H */
