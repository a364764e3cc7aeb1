#ifndef EIKONAL_LINES_H
#define EIKONAL_LINES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ElFieldKind {
  ElFieldKind_Viscosity = 0,
  ElFieldKind_Competitor = 1,
  ElFieldKind_OneDTransition = 2,
  ElFieldKind_Tiling = 3,
} ElFieldKind;

typedef enum ElStatus {
  ElStatus_Ok = 0,
  ElStatus_NullPointer = 1,
  ElStatus_InvalidArgument = 2,
  ElStatus_OutsideDomain = 3,
  ElStatus_OnJumpCurve = 4,
  ElStatus_SingularPoint = 5,
  ElStatus_Numerical = 6,
  ElStatus_NoSignChange = 7,
  ElStatus_Io = 8,
  ElStatus_Panic = 9,
} ElStatus;

/**
 * Opaque jump-cost handle.
 */
typedef struct ElCost ElCost;

/**
 * Opaque field handle.
 */
typedef struct ElField ElField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *el_last_error_message(void);

/**
 * Creates a field; `n` is the tile count and is ignored unless `kind` is `Tiling`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum ElStatus el_field_new(enum ElFieldKind kind, double theta0, uintptr_t n, struct ElField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`el_field_new`] not freed before.
 */
void el_field_free(struct ElField *field);

/**
 * Field value at `(x, y)`.
 *
 * # Safety
 * `field` must be a live handle; `mx`, `my` must be writable.
 */
enum ElStatus el_field_eval(const struct ElField *field,
                            double x,
                            double y,
                            double *mx,
                            double *my);

/**
 * Number of declared jump curves, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uintptr_t el_field_curve_count(const struct ElField *field);

/**
 * `f(t) = t^p`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ElStatus el_cost_power(double p, struct ElCost **out);

/**
 * Piecewise-linear cost through `len` knots `(ts[i], values[i])`.
 *
 * # Safety
 * `ts` and `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ElStatus el_cost_table(const double *ts,
                            const double *values,
                            uintptr_t len,
                            struct ElCost **out);

/**
 * Cost from a `power:<p>` or `table:<csv path>` string.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ElStatus el_cost_parse(const char *text, struct ElCost **out);

/**
 * # Safety
 * `cost` must be null or a handle not freed before.
 */
void el_cost_free(struct ElCost *cost);

/**
 * Total line energy of `field` for `cost`; may be `+inf`.
 *
 * # Safety
 * Handles must be live; `total` must be writable.
 */
enum ElStatus el_line_energy(const struct ElField *field,
                             const struct ElCost *cost,
                             double tol,
                             double *total);

/**
 * Competitor energy minus viscosity-solution energy.
 *
 * # Safety
 * `cost` must be live; `gap` must be writable.
 */
enum ElStatus el_energy_gap(const struct ElCost *cost, double theta0, double tol, double *gap);

/**
 * Angle where the gap for `t^p` changes sign, with its bracket.
 *
 * # Safety
 * Output pointers must be writable; `lo` and `hi` may be null.
 */
enum ElStatus el_critical_angle(double p, double tol, double *theta_star, double *lo, double *hi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EIKONAL_LINES_H */
