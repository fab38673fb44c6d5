#ifndef TIEKIT_H
#define TIEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call in this interface.
enum TkStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // The call succeeded and all output parameters are set.
  TK_STATUS_OK = 0,
  // A required pointer argument was NULL.
  TK_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TK_STATUS_INVALID_UTF8 = 2,
  // The input could not be parsed; see `tk_last_error_message`.
  TK_STATUS_PARSE = 3,
  // The temporal constraints admit no timeline.
  TK_STATUS_INCONSISTENT = 4,
  // An entity id is not part of the document or graph.
  TK_STATUS_UNKNOWN_ENTITY = 5,
  // An unexpected internal failure; see `tk_last_error_message`.
  TK_STATUS_INTERNAL = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum TkStatus TkStatus;
#else
typedef int32_t TkStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// An opaque parsed document handle.
typedef struct TkDocument TkDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of this library as a static string; do not free it.
const char *tk_version(void);

// Message for the most recent failure on this thread, or NULL if none.
// Valid until the next failing call on the same thread; do not free it.
const char *tk_last_error_message(void);

// Release a string returned by this interface. NULL is a no-op.
void tk_string_free(char *s);

// Parse one document from its canonical JSON record.
TkStatus tk_document_from_json(const char *json, struct TkDocument **out);

// Parse one TimeML (`.tml`/`.xml`) file from disk. Recoverable annotation
// problems are repaired silently here; use the CLI to see warnings.
TkStatus tk_document_read_timeml(const char *path, struct TkDocument **out);

// Release a document handle. NULL is a no-op.
void tk_document_free(struct TkDocument *doc);

// The document's name, as a fresh string.
TkStatus tk_document_name(const struct TkDocument *doc, char **out);

// Number of annotated entities (events and time expressions; the creation
// time is not included).
TkStatus tk_document_entity_count(const struct TkDocument *doc, size_t *out);

// Number of temporal links.
TkStatus tk_document_tlink_count(const struct TkDocument *doc, size_t *out);

// Whether the document's tlinks admit at least one timeline.
TkStatus tk_document_is_consistent(const struct TkDocument *doc, bool *out);

// Temporal closure of the document's tlinks, as a JSON array of link
// records (the same shape the interchange format uses). On inconsistency
// the status is `TK_STATUS_INCONSISTENT` and the error message names the
// size of the conflicting subset.
TkStatus tk_document_closure_json(const struct TkDocument *doc, char **out);

// The entailed relation between two entities, as a JSON object of the four
// endpoint-order slots (`null` where nothing is entailed).
TkStatus tk_document_relation_between(const struct TkDocument *doc,
                                      const char *source,
                                      const char *target,
                                      char **out);

// Entailment-based evaluation of one document's predicted tlinks against
// gold. With `repair_predictions` true, inconsistent predictions are
// greedily repaired (as the evaluator does); with it false they are an
// error. Writes temporal precision, recall, and their harmonic mean.
TkStatus tk_temporal_awareness(const struct TkDocument *gold,
                               const struct TkDocument *predictions,
                               bool repair_predictions,
                               double *precision,
                               double *recall,
                               double *f1);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIEKIT_H */
