#ifndef MODTORS_H
#define MODTORS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MtStatus {
  MT_STATUS_OK = 0,
  MT_STATUS_NULL_POINTER = 1,
  MT_STATUS_INVALID_ARGUMENT = 2,
  MT_STATUS_NOT_PRIME = 3,
  MT_STATUS_OUT_OF_RANGE = 4,
  MT_STATUS_LIMIT_EXCEEDED = 5,
  MT_STATUS_PRECONDITION = 6,
  MT_STATUS_INTERNAL = 7,
} MtStatus;

/**
 * Enumerated `P^1(Z/p^n)`.
 */
typedef struct MtP1Table MtP1Table;

/**
 * Presentation of relative homology over `Q` or `F_l`, with its table.
 */
typedef struct MtPresentation MtPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library.
 */
const char *mt_last_error(void);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum MtStatus mt_p1_table_new(uint64_t p, uint32_t n, struct MtP1Table **out);

/**
 * # Safety
 * `table` must come from [`mt_p1_table_new`] or be null.
 */
void mt_p1_table_free(struct MtP1Table *table);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_p1_table_len(const struct MtP1Table *table, size_t *out);

/**
 * Index of the image of point `index` under `(w, t) -> (-t, w)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_p1_table_sigma(const struct MtP1Table *table, size_t index, size_t *out);

/**
 * Index of the image of point `index` under `(w, t) -> (t, -w - t)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_p1_table_tau(const struct MtP1Table *table, size_t index, size_t *out);

/**
 * Index of the class of `(c, d)`; `MT_STATUS_INVALID_ARGUMENT` when the pair
 * is not a point.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_p1_table_normalize(const struct MtP1Table *table,
                                    int64_t c,
                                    int64_t d,
                                    size_t *out);

/**
 * Presentation for `p^n` over `F_l`, or over `Q` when `l = 0`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum MtStatus mt_presentation_new(uint64_t p, uint32_t n, uint64_t l, struct MtPresentation **out);

/**
 * # Safety
 * `pres` must come from [`mt_presentation_new`] or be null.
 */
void mt_presentation_free(struct MtPresentation *pres);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_presentation_quotient_dim(const struct MtPresentation *pres, size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_presentation_relation_rank(const struct MtPresentation *pres, size_t *out);

/**
 * Rank of `T_1 {0, oo}, ..., T_imax {0, oo}` in the quotient.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MtStatus mt_presentation_hecke_span_rank(const struct MtPresentation *pres,
                                              uint64_t imax,
                                              size_t *out);

/**
 * Independence report for `sd` Hecke images, as JSON. The presentation must
 * be over a finite field.
 *
 * # Safety
 * Pointers must be valid; free the string with [`mt_string_free`].
 */
enum MtStatus mt_criterion_json(const struct MtPresentation *pres, uint64_t d, char **out);

/**
 * Final torsion bound and criterion threshold for `(p, d)`, as JSON.
 *
 * # Safety
 * `out` must be valid; free the string with [`mt_string_free`].
 */
enum MtStatus mt_bounds_json(uint64_t p, uint64_t d, bool original_order, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void mt_string_free(char *s);

/**
 * Library version, static.
 */
const char *mt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODTORS_H */
