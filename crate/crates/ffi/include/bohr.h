#ifndef BOHR_H
#define BOHR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BohrStatus {
  BOHR_STATUS_OK = 0,
  BOHR_STATUS_NULL_POINTER = 1,
  BOHR_STATUS_INVALID_PARAMETER = 2,
  BOHR_STATUS_DOMAIN = 3,
  BOHR_STATUS_NO_ROOT = 4,
  BOHR_STATUS_NUMERICAL = 5,
  BOHR_STATUS_NOT_APPLICABLE = 6,
  BOHR_STATUS_PANIC = 7,
} BohrStatus;

typedef enum BohrRowStatus {
  BOHR_ROW_STATUS_MATCH = 0,
  BOHR_ROW_STATUS_MISMATCH = 1,
  BOHR_ROW_STATUS_ERRATUM_SUSPECTED = 2,
} BohrRowStatus;

typedef enum BohrFamily {
  BOHR_FAMILY_D = 0,
  BOHR_FAMILY_E = 1,
  BOHR_FAMILY_F = 2,
  BOHR_FAMILY_G = 3,
  BOHR_FAMILY_H = 4,
  BOHR_FAMILY_FA = 5,
  BOHR_FAMILY_GA = 6,
  BOHR_FAMILY_HA = 7,
  BOHR_FAMILY_RU = 8,
} BohrFamily;

typedef enum BohrTheoremId {
  BOHR_THEOREM_ID_T2_1 = 0,
  BOHR_THEOREM_ID_T2_2 = 1,
  BOHR_THEOREM_ID_T2_3 = 2,
  BOHR_THEOREM_ID_T3_1 = 3,
  BOHR_THEOREM_ID_T3_2 = 4,
  BOHR_THEOREM_ID_T4_1 = 5,
  BOHR_THEOREM_ID_T4_2 = 6,
  BOHR_THEOREM_ID_T4_3 = 7,
} BohrTheoremId;

typedef struct BohrEquation BohrEquation;

typedef struct BohrTable BohrTable;

typedef struct BohrTheorem BohrTheorem;

/**
 * Mirrors `Params`; each family reads only some fields.
 */
typedef struct BohrParams {
  double big_k;
  uint32_t m;
  double t;
  double lambda;
  double p;
  double alpha;
} BohrParams;

typedef struct BohrEnclosure {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
  uint64_t evaluations;
  double tol;
} BohrEnclosure;

typedef struct BohrTableRow {
  uint8_t table_id;
  uint32_t family;
  struct BohrParams params;
  double paper_value;
  double computed;
  double abs_diff;
  enum BohrRowStatus status;
} BohrTableRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the library, statically allocated.
 */
const char *bohr_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library on the same thread.
 */
const char *bohr_last_error_message(void);

/**
 * `K = 1, m = 1, t = 0, lambda = 1, p = 0.5, alpha = 1`.
 */
struct BohrParams bohr_params_default(void);

/**
 * Upper bound on the radii, `1/3`.
 */
double bohr_cap(void);

enum BohrStatus bohr_equation_new(uint32_t family,
                                  const struct BohrParams *params,
                                  struct BohrEquation **out);

void bohr_equation_free(struct BohrEquation *eq);

enum BohrStatus bohr_equation_evaluate(const struct BohrEquation *eq, double r, double *out);

/**
 * Domain `(lo, hi)` of the family.
 */
enum BohrStatus bohr_equation_domain(const struct BohrEquation *eq, double *lo, double *hi);

enum BohrStatus bohr_equation_solve(const struct BohrEquation *eq,
                                    double tol,
                                    struct BohrEnclosure *out);

enum BohrStatus bohr_theorem_new(uint32_t id,
                                 const struct BohrParams *params,
                                 struct BohrTheorem **out);

void bohr_theorem_free(struct BohrTheorem *thm);

/**
 * Root enclosure and `min(root, 1/3)`; either output may be NULL.
 */
enum BohrStatus bohr_theorem_effective_radius(const struct BohrTheorem *thm,
                                              double tol,
                                              struct BohrEnclosure *root,
                                              double *capped);

enum BohrStatus bohr_theorem_rhs(const struct BohrTheorem *thm, double *out);

/**
 * Value of the left-hand side for the extremal mapping (`mu = 1`) at `r`.
 */
enum BohrStatus bohr_theorem_extremal_lhs(const struct BohrTheorem *thm, double r, double *out);

/**
 * Returns `BOHR_STATUS_NOT_APPLICABLE` when the root exceeds `1/3`.
 */
enum BohrStatus bohr_theorem_check_sharpness(const struct BohrTheorem *thm,
                                             double eps,
                                             bool *below_ok,
                                             bool *above_violates);

/**
 * Seeded Monte-Carlo run; writes the number of violated checks.
 */
enum BohrStatus bohr_theorem_monte_carlo(const struct BohrTheorem *thm,
                                         uint64_t seed,
                                         uint64_t samples,
                                         size_t radii,
                                         uint64_t *violations);

/**
 * Table 1..7, or 0 for all tables.
 */
enum BohrStatus bohr_table_new(uint8_t id, struct BohrTable **out);

void bohr_table_free(struct BohrTable *table);

/**
 * Number of rows; 0 for NULL.
 */
size_t bohr_table_len(const struct BohrTable *table);

enum BohrStatus bohr_table_row(const struct BohrTable *table,
                               size_t index,
                               struct BohrTableRow *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOHR_H */
