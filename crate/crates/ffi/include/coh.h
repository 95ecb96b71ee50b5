#ifndef COH_H
#define COH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call.
 */
typedef enum CohStatus {
  COH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  COH_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  COH_STATUS_INVALID_UTF8 = 2,
  /**
   * A formula or rational failed to parse.
   */
  COH_STATUS_PARSE = 3,
  /**
   * Well-formed input that the operation rejects.
   */
  COH_STATUS_VALIDATION = 4,
  /**
   * Too many events or variables, or a formula too deep.
   */
  COH_STATUS_DIMENSION_CAP = 5,
  /**
   * The book is incoherent, so the operation has no answer.
   */
  COH_STATUS_INCOHERENT = 6,
  COH_STATUS_INTERNAL = 7,
} CohStatus;

/**
 * An ordered list of events.
 */
typedef struct CohEventList CohEventList;

/**
 * The outcome of a coherence check, with its certificate.
 */
typedef struct CohVerdict CohVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *coh_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void coh_string_free(char *s);

struct CohEventList *coh_event_list_new(void);

/**
 * Parses `event` and appends it.
 *
 * # Safety
 * `list` must come from [`coh_event_list_new`]; `event` must be a
 * nul-terminated string.
 */
enum CohStatus coh_event_list_push(struct CohEventList *list, const char *event);

/**
 * # Safety
 * `list` must be null or come from [`coh_event_list_new`].
 */
size_t coh_event_list_len(const struct CohEventList *list);

/**
 * # Safety
 * `list` must be null or come from [`coh_event_list_new`], not yet freed.
 */
void coh_event_list_free(struct CohEventList *list);

/**
 * Writes the coherent set as JSON `{"vertices": [...], "halfspaces": [...]}`.
 *
 * # Safety
 * `list` must be a live event list and `out_json` a valid pointer.
 */
enum CohStatus coh_coherent_set_json(const struct CohEventList *list, char **out_json);

/**
 * Decides coherence of the book `prices[0..n]` (rational strings such as
 * `"1/2"`) on `list`.
 *
 * # Safety
 * `list` must be a live event list, `prices` must point to `n` strings and
 * `out` must be a valid pointer.
 */
enum CohStatus coh_check_book(const struct CohEventList *list,
                              const char *const *prices,
                              size_t n,
                              struct CohVerdict **out);

/**
 * # Safety
 * `v` must be null or a live verdict.
 */
bool coh_verdict_is_coherent(const struct CohVerdict *v);

/**
 * # Safety
 * `v` must be a live verdict and `out_json` a valid pointer.
 */
enum CohStatus coh_verdict_to_json(const struct CohVerdict *v, char **out_json);

/**
 * # Safety
 * `v` must be null or a live verdict, not yet freed.
 */
void coh_verdict_free(struct CohVerdict *v);

/**
 * The interval of coherent prices for `event` given a coherent book on
 * `list`. Returns [`CohStatus::Incoherent`] if the book is not coherent.
 *
 * # Safety
 * As for [`coh_check_book`]; `event` must be a nul-terminated string and
 * `out_lo`, `out_hi` valid pointers.
 */
enum CohStatus coh_extension_interval(const struct CohEventList *list,
                                      const char *const *prices,
                                      size_t n,
                                      const char *event,
                                      char **out_lo,
                                      char **out_hi);

/**
 * Decides whether `premise` entails `conclusion` in FP(Ł,Ł). `out_json`
 * may be null; otherwise it receives `{"holds": ..., "countermodel": ...}`.
 *
 * # Safety
 * `premise`, `conclusion` must be nul-terminated strings; `out_holds` must
 * be a valid pointer.
 */
enum CohStatus coh_decide_consequence(const char *premise,
                                      const char *conclusion,
                                      bool *out_holds,
                                      char **out_json);

/**
 * The least `n` with `premise^n -> conclusion` a theorem, or 0 when the
 * premise does not entail the conclusion.
 *
 * # Safety
 * `premise`, `conclusion` must be nul-terminated strings; `out_n` must be a
 * valid pointer.
 */
enum CohStatus coh_local_deduction_exponent(const char *premise,
                                            const char *conclusion,
                                            uint32_t *out_n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COH_H */
