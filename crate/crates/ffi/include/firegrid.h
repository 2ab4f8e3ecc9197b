#ifndef FIREGRID_H
#define FIREGRID_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FgStatus {
  FG_STATUS_OK = 0,
  FG_STATUS_NULL_POINTER = 1,
  FG_STATUS_INVALID_UTF8 = 2,
  FG_STATUS_INVALID_JSON = 3,
  FG_STATUS_INVALID_VERTEX = 4,
  FG_STATUS_INVALID_LATTICE = 5,
  FG_STATUS_WINDOW_EXCEEDED = 6,
  FG_STATUS_BUDGET_EXCEEDED = 7,
  FG_STATUS_PROTECT_BURNING = 8,
  FG_STATUS_ALREADY_PROTECTED = 9,
  FG_STATUS_CONTAINED = 10,
  FG_STATUS_UNKNOWN_STRATEGY = 11,
  FG_STATUS_INVALID_PARAMS = 12,
  FG_STATUS_PRECONDITION_VIOLATION = 13,
  FG_STATUS_TOO_LARGE = 14,
  FG_STATUS_NUMERIC = 15,
  FG_STATUS_IO = 16,
  FG_STATUS_PANIC = 17,
} FgStatus;

/**
 * Opaque game handle.
 */
typedef struct FgGame FgGame;

/**
 * Opaque strategy handle.
 */
typedef struct FgStrategy FgStrategy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fg_last_error_message(void);

/**
 * Creates a game from JSON such as
 * `{"lattice": {"kind": "finite_square", "n": 11}, "fires": [[0, 0]], "schedule": {"base": 1}}`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FgStatus fg_game_new(const char *config_json, struct FgGame **out);

/**
 * # Safety
 * `game` must come from `fg_game_new` (or be null) and not be used afterwards.
 */
void fg_game_free(struct FgGame *game);

/**
 * Protects `count` vertices given as `(a, b)` pairs in `coords`.
 *
 * # Safety
 * `game` must be a live handle; `coords` must hold `2 * count` values.
 */
enum FgStatus fg_game_protect(struct FgGame *game, const int64_t *coords, size_t count);

/**
 * Spreads the fire, ending the round. Writes the number of newly burning
 * vertices to `ignited` when it is not null.
 *
 * # Safety
 * `game` must be a live handle; `ignited` null or valid.
 */
enum FgStatus fg_game_spread(struct FgGame *game, uint64_t *ignited);

/**
 * Creates a strategy from `{"name": ..., "params": {...}}`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FgStatus fg_strategy_new(const char *spec_json, struct FgStrategy **out);

/**
 * # Safety
 * `strategy` must come from `fg_strategy_new` (or be null) and not be used afterwards.
 */
void fg_strategy_free(struct FgStrategy *strategy);

/**
 * Plays one full round: the strategy protects, then the fire spreads.
 *
 * # Safety
 * Both handles must be live.
 */
enum FgStatus fg_game_step(struct FgGame *game, struct FgStrategy *strategy);

/**
 * # Safety
 * `game` must be a live handle and `out` valid.
 */
enum FgStatus fg_game_is_contained(const struct FgGame *game, bool *out);

/**
 * Writes the completed turns and the burning and protected counts. Null
 * output pointers are skipped.
 *
 * # Safety
 * `game` must be a live handle; outputs null or valid.
 */
enum FgStatus fg_game_counts(const struct FgGame *game,
                             uint32_t *turn,
                             uint64_t *burning,
                             uint64_t *protected_count);

/**
 * Full state as JSON: turn, remaining budget, burning and protected lists.
 *
 * # Safety
 * `game` must be a live handle and `out` valid.
 */
enum FgStatus fg_game_state_json(const struct FgGame *game, char **out);

/**
 * Solves a small finite instance given as game JSON, optionally with
 * `"options": {...}`, and writes `{sn, sequence, nodes, proved}`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` valid.
 */
enum FgStatus fg_solve_json(const char *config_json, char **out);

/**
 * Exact lower and upper bounds on the grid surviving rate.
 *
 * # Safety
 * Outputs must be valid pointers.
 */
enum FgStatus fg_bounds_theorem1(double *lower, double *upper);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library (or be null) and not be used afterwards.
 */
void fg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIREGRID_H */
