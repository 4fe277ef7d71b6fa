/* C interface for the calbehav rule miner. */

#ifndef CALBEHAV_H
#define CALBEHAV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * What a mined rule predicts the user does with a ringing call.
 */
typedef enum CalbehavBehavior {
  /**
   * No rule matched the queried context.
   */
  CALBEHAV_BEHAVIOR_NONE = 0,
  CALBEHAV_BEHAVIOR_ACCEPT = 1,
  CALBEHAV_BEHAVIOR_REJECT = 2,
  CALBEHAV_BEHAVIOR_MISSED = 3,
} CalbehavBehavior;

/**
 * Result of a calbehav call.
 */
typedef enum CalbehavStatus {
  /**
   * The call succeeded.
   */
  CALBEHAV_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CALBEHAV_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was malformed (bad UTF-8, bad window, bad threshold).
   */
  CALBEHAV_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The calendar, call log, or relationship input failed to parse.
   */
  CALBEHAV_STATUS_PARSE_ERROR = 3,
  /**
   * The inputs produced no behavioral evidence to mine.
   */
  CALBEHAV_STATUS_NO_EVIDENCE = 4,
  /**
   * An unexpected internal failure; see calbehav_last_error.
   */
  CALBEHAV_STATUS_INTERNAL_ERROR = 5,
} CalbehavStatus;

/**
 * Opaque set of mined behavioral rules.
 */
typedef struct CalbehavRules CalbehavRules;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Mines behavioral rules from iCalendar text and a call-log CSV.
 *
 * `relationships_csv`, `window`, and `min_confidence` may be null for
 * their defaults (no relationships, the call log's own date span, and
 * 0.8). `min_support` 0 means the default of 3. On success `*out` owns
 * the rule set; free it with `calbehav_rules_free`.
 *
 * # Safety
 * String arguments must be NUL-terminated and stay valid for the call.
 * `out` must point to writable storage.
 */
enum CalbehavStatus calbehav_mine(const char *calendar_ics,
                                  const char *calls_csv,
                                  const char *relationships_csv,
                                  const char *window,
                                  const char *min_confidence,
                                  size_t min_support,
                                  bool per_node_precedence,
                                  struct CalbehavRules **out);

/**
 * Number of rules in a mined set; 0 for null.
 *
 * # Safety
 * `rules` must be null or a pointer from `calbehav_mine`.
 */
size_t calbehav_rules_len(const struct CalbehavRules *rules);

/**
 * Writes the rule set as a JSON array (antecedent, consequent, support,
 * confidence) to `*out`. Free the string with `calbehav_string_free`.
 *
 * # Safety
 * `rules` must come from `calbehav_mine`; `out` must be writable.
 */
enum CalbehavStatus calbehav_rules_json(const struct CalbehavRules *rules, char **out);

/**
 * Writes the rule set rendered one rule per line, strongest first, to
 * `*out`. Free the string with `calbehav_string_free`.
 *
 * # Safety
 * `rules` must come from `calbehav_mine`; `out` must be writable.
 */
enum CalbehavStatus calbehav_rules_text(const struct CalbehavRules *rules, char **out);

/**
 * Predicts the behavior for one call context. `event_type` is
 * "Recurring" or "NonRecurring"; `day_time` uses the rendered form
 * "Monday[10:00-12:00]"; unmapped contacts use relationship "unknown".
 * The most specific matching rule wins (longest antecedent, then
 * highest confidence, then support). `*out_behavior` is
 * `CALBEHAV_BEHAVIOR_NONE` when nothing matches.
 *
 * # Safety
 * All pointers must be valid; strings NUL-terminated.
 */
enum CalbehavStatus calbehav_rules_match(const struct CalbehavRules *rules,
                                         const char *event_name,
                                         const char *event_type,
                                         const char *day_time,
                                         const char *relationship,
                                         enum CalbehavBehavior *out_behavior);

/**
 * Expands iCalendar text over a window ("YYYY-MM-DD..YYYY-MM-DD") and
 * writes the dated occurrences as a JSON array to `*out`. Free the
 * string with `calbehav_string_free`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum CalbehavStatus calbehav_expand_json(const char *calendar_ics, const char *window, char **out);

/**
 * Releases a rule set from `calbehav_mine`. Null is a no-op.
 *
 * # Safety
 * `rules` must be null or a pointer from `calbehav_mine`, freed once.
 */
void calbehav_rules_free(struct CalbehavRules *rules);

/**
 * Releases a string returned through an out-pointer. Null is a no-op.
 *
 * # Safety
 * `text` must be null or a string this library returned, freed once.
 */
void calbehav_string_free(char *text);

/**
 * Message for the most recent failure on this thread; empty when the
 * last call succeeded. Valid until the next calbehav call on the same
 * thread. Do not free.
 */
const char *calbehav_last_error(void);

/**
 * Library version as a static string. Do not free.
 */
const char *calbehav_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CALBEHAV_H */
