#ifndef DDGEO_H
#define DDGEO_H

/* Generated by cbindgen from the ddgeo-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DdgeoStatus {
  DDGEO_STATUS_OK = 0,
  DDGEO_STATUS_INFEASIBLE = 1,
  DDGEO_STATUS_INVALID_ARGUMENT = 2,
  DDGEO_STATUS_INTERNAL = 3,
  DDGEO_STATUS_NULL_POINTER = 4,
  DDGEO_STATUS_BUFFER_TOO_SMALL = 5,
  DDGEO_STATUS_PANIC = 6,
} DdgeoStatus;

/**
 * Opaque path handle.
 */
typedef struct DdgeoPath DdgeoPath;

typedef struct DdgeoParams {
  /**
   * Turn bound in radians.
   */
  double theta;
  double ell;
  uint32_t n_sides;
} DdgeoParams;

/**
 * Point and heading angle in radians.
 */
typedef struct DdgeoConfig {
  double x;
  double y;
  double heading;
} DdgeoConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *ddgeo_last_error(void);

/**
 * Parameters with `theta = 2π / n_sides`.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `DdgeoParams`.
 */
enum DdgeoStatus ddgeo_params_from_n(uint32_t n_sides, double ell, struct DdgeoParams *out);

/**
 * Builds a path from `count` interleaved coordinates `xy[2i], xy[2i+1]`.
 * The first and last vertex must match the configurations.
 *
 * # Safety
 * `xy` must point to `2 * count` doubles; `out` must be writable.
 */
enum DdgeoStatus ddgeo_path_new(struct DdgeoConfig start,
                                struct DdgeoConfig end,
                                const double *xy,
                                size_t count,
                                struct DdgeoPath **out);

/**
 * Releases a path; null is ignored.
 *
 * # Safety
 * `path` must come from this library and not be used afterwards.
 */
void ddgeo_path_free(struct DdgeoPath *path);

/**
 * # Safety
 * `path` must be a live handle; `out` must be writable.
 */
enum DdgeoStatus ddgeo_path_vertex_count(const struct DdgeoPath *path, size_t *out);

/**
 * Copies the vertices as interleaved coordinates into `xy`, which holds
 * `capacity` vertices.
 *
 * # Safety
 * `xy` must point to `2 * capacity` writable doubles.
 */
enum DdgeoStatus ddgeo_path_vertices(const struct DdgeoPath *path, double *xy, size_t capacity);

/**
 * # Safety
 * `path` must be a live handle; `out` must be writable.
 */
enum DdgeoStatus ddgeo_path_length(const struct DdgeoPath *path, double *out);

/**
 * `DDGEO_STATUS_OK` when feasible, `DDGEO_STATUS_INFEASIBLE` otherwise;
 * the number of violations goes to `violations` when it is not null.
 *
 * # Safety
 * `path` and `params` must be valid pointers.
 */
enum DdgeoStatus ddgeo_validate(const struct DdgeoPath *path,
                                const struct DdgeoParams *params,
                                size_t *violations);

/**
 * Writes the type word (e.g. "ABA") as a NUL-terminated string.
 *
 * # Safety
 * `buf` must point to `capacity` writable bytes.
 */
enum DdgeoStatus ddgeo_classify(const struct DdgeoPath *path,
                                const struct DdgeoParams *params,
                                char *buf,
                                size_t capacity);

/**
 * Shortens a feasible path by local rewrites; the result is a new handle.
 *
 * # Safety
 * Pointers must be valid; `out` must be writable.
 */
enum DdgeoStatus ddgeo_shorten(const struct DdgeoPath *path,
                               const struct DdgeoParams *params,
                               size_t budget,
                               struct DdgeoPath **out);

/**
 * Shortest feasible path between two configurations.
 *
 * # Safety
 * `params` must be valid; `out` must be writable.
 */
enum DdgeoStatus ddgeo_plan(struct DdgeoConfig start,
                            struct DdgeoConfig end,
                            const struct DdgeoParams *params,
                            struct DdgeoPath **out);

/**
 * Length of the shortest unit-radius smooth path.
 *
 * # Safety
 * `out` must be writable.
 */
enum DdgeoStatus ddgeo_dubins_length(struct DdgeoConfig start, struct DdgeoConfig end, double *out);

/**
 * The path as a JSON document; release with `ddgeo_string_free`.
 *
 * # Safety
 * Pointers must be valid; `out` must be writable.
 */
enum DdgeoStatus ddgeo_path_to_json(const struct DdgeoPath *path,
                                    const struct DdgeoParams *params,
                                    char **out);

/**
 * Parses a JSON path document into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DdgeoStatus ddgeo_path_from_json(const char *json, struct DdgeoPath **out);

/**
 * # Safety
 * `s` must come from this library; null is ignored.
 */
void ddgeo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDGEO_H */
