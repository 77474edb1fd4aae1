#ifndef DIRACDET_H
#define DIRACDET_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DdStatus {
  DD_STATUS_OK = 0,
  DD_STATUS_NULL_POINTER = 1,
  DD_STATUS_INVALID_ARGUMENT = 2,
  DD_STATUS_DOMAIN = 3,
  DD_STATUS_UNSUPPORTED_PARITY = 4,
  DD_STATUS_OVERFLOW = 5,
  DD_STATUS_VERIFICATION = 6,
  DD_STATUS_INTERNAL = 7,
} DdStatus;

/**
 * Logarithmic divergence report.
 */
typedef struct DdReport DdReport;

/**
 * Computed quartic coefficient table.
 */
typedef struct DdTable DdTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Release
 * with [`dd_string_free`].
 */
char *dd_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void dd_string_free(char *s);

/**
 * Exact N_{n,k} as a reduced fraction.
 *
 * # Safety
 * `num` and `den` must be valid for writes.
 */
enum DdStatus dd_n_integral(uint32_t n, uint32_t k, int64_t *num, int64_t *den);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum DdStatus dd_table_compute(struct DdTable **out);

/**
 * # Safety
 * `t` must be null or a handle from [`dd_table_compute`], freed once.
 */
void dd_table_free(struct DdTable *t);

/**
 * # Safety
 * `t` must be a live table handle.
 */
size_t dd_table_len(const struct DdTable *t);

/**
 * Vertex types of entry `i`, written as 0 or 5 into `s[0..4]`.
 *
 * # Safety
 * `t` must be a live table handle and `s` valid for four writes.
 */
enum DdStatus dd_table_signature(const struct DdTable *t, size_t i, uint8_t *s);

/**
 * Coefficient `which` (0 = A, 1 = B, 2 = C, 3 = D) of entry `i` as
 * re_num/re_den + i·im_num/im_den.
 *
 * # Safety
 * `t` must be a live table handle; all out-pointers valid for writes.
 */
enum DdStatus dd_table_coefficient(const struct DdTable *t,
                                   size_t i,
                                   uint32_t which,
                                   int64_t *re_num,
                                   int64_t *re_den,
                                   int64_t *im_num,
                                   int64_t *im_den);

/**
 * Whether entry `i` agrees with the shipped reference table.
 *
 * # Safety
 * `t` must be a live table handle and `matches` valid for writes.
 */
enum DdStatus dd_table_matches(const struct DdTable *t, size_t i, bool *matches);

/**
 * `eta_order` is the highest η power kept in the I series (even, ≥ 2).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DdStatus dd_report_compute(uint32_t eta_order, struct DdReport **out);

/**
 * # Safety
 * `r` must be null or a handle from [`dd_report_compute`], freed once.
 */
void dd_report_free(struct DdReport *r);

/**
 * Mass-term constant in units of m²/(24π²).
 *
 * # Safety
 * `r` must be a live report handle; `num`, `den` valid for writes.
 */
enum DdStatus dd_report_mass_term(const struct DdReport *r, int64_t *num, int64_t *den);

/**
 * Whether the C = 0 projection equals the Yang-Mills density.
 *
 * # Safety
 * `r` must be a live report handle and `equal` valid for writes.
 */
enum DdStatus dd_report_yang_mills(const struct DdReport *r, bool *equal);

/**
 * JSON form of the report. Release with [`dd_string_free`].
 *
 * # Safety
 * `r` must be a live report handle and `json` valid for writes.
 */
enum DdStatus dd_report_to_json(const struct DdReport *r, char **json);

/**
 * Runs the verification suite. `json` may be null; otherwise it receives
 * the records, released with [`dd_string_free`].
 *
 * # Safety
 * `passed` must be valid for writes; `json` null or valid for writes.
 */
enum DdStatus dd_verify(uint32_t oracle_order, bool *passed, char **json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DIRACDET_H */
