#ifndef STREAMSAMPLE_H
#define STREAMSAMPLE_H

/* Generated by cbindgen from streamsample-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Reservoir sampling method selector.
typedef enum SsReservoirMethod {
  SS_RESERVOIR_METHOD_ALG_R = 0,
  SS_RESERVOIR_METHOD_ALG_L = 1,
  SS_RESERVOIR_METHOD_ALG_RSWR_SKIP = 2,
  SS_RESERVOIR_METHOD_ALG_A_RES = 3,
  SS_RESERVOIR_METHOD_ALG_A_EXP_J = 4,
  SS_RESERVOIR_METHOD_ALG_WRSWR_SKIP = 5,
} SsReservoirMethod;

// Sequential sampling method selector.
typedef enum SsSequentialMethod {
  SS_SEQUENTIAL_METHOD_ALG_D = 0,
  SS_SEQUENTIAL_METHOD_ALG_HIDDEN_SHUFFLE = 1,
  SS_SEQUENTIAL_METHOD_ALG_ORD_SWR = 2,
  SS_SEQUENTIAL_METHOD_ALG_ORD_WSWR = 3,
} SsSequentialMethod;

// Result of a fallible API call.
typedef enum SsStatus {
  // Success.
  SS_STATUS_OK = 0,
  // A sequential sampler has emitted its full sample.
  SS_STATUS_DONE = 1,
  // A required pointer argument was null.
  SS_STATUS_NULL_POINTER = 2,
  // Sample capacity must be at least 1.
  SS_STATUS_INVALID_CAPACITY = 3,
  // Weight must be positive and finite.
  SS_STATUS_INVALID_WEIGHT = 4,
  // Weight supplied to an unweighted method.
  SS_STATUS_WEIGHT_NOT_ALLOWED = 5,
  // Weighted method updated without a weight.
  SS_STATUS_WEIGHT_REQUIRED = 6,
  // Merge inputs disagree on method or capacity.
  SS_STATUS_INCOMPATIBLE_MERGE = 7,
  // Without-replacement request with K larger than the population.
  SS_STATUS_SAMPLE_TOO_LARGE = 8,
  // Declared total must be positive (and finite for weights).
  SS_STATUS_INVALID_TOTAL = 9,
  // Weighted sequential sampling without replacement is impossible
  // knowing only the total weight.
  SS_STATUS_UNSUPPORTED = 10,
  // Stream ended before the declared total was consumed.
  SS_STATUS_TRUNCATED = 11,
  // Output buffer capacity is smaller than the sample.
  SS_STATUS_BUFFER_TOO_SMALL = 12,
  // Wrong driver call for the method (skip-driven vs weight-driven).
  SS_STATUS_WRONG_DRIVER = 13,
} SsStatus;

// Opaque reservoir sampler over u64 items.
typedef struct SsReservoir SsReservoir;

// Opaque sequential sampler state.
typedef struct SsSequential SsSequential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a reservoir sampler. On `Ok` the caller owns the handle and
// must release it with `ss_reservoir_free`.
enum SsStatus ss_reservoir_new(enum SsReservoirMethod method,
                               uint64_t capacity,
                               uint64_t seed,
                               struct SsReservoir **out);

// Release a reservoir handle; null is a no-op.
void ss_reservoir_free(struct SsReservoir *reservoir);

// Process one element of an unweighted stream.
enum SsStatus ss_reservoir_fit(struct SsReservoir *reservoir, uint64_t item);

// Process one element of a weighted stream.
enum SsStatus ss_reservoir_fit_weighted(struct SsReservoir *reservoir,
                                        uint64_t item,
                                        double weight);

// Current sample length (min(n, K) without replacement, K with).
uint64_t ss_reservoir_len(const struct SsReservoir *reservoir);

// Stream elements processed so far.
uint64_t ss_reservoir_items_seen(const struct SsReservoir *reservoir);

// Cumulative weight processed so far (0 for unweighted methods).
double ss_reservoir_weight_seen(const struct SsReservoir *reservoir);

// Snapshot the current sample into `buffer` (capacity in items).
// Writes the sample length to `written`. The sampler is unchanged.
enum SsStatus ss_reservoir_value(const struct SsReservoir *reservoir,
                                 uint64_t *buffer,
                                 size_t buffer_capacity,
                                 size_t *written);

// Merge two samplers of identical method and capacity into a fresh
// handle distributed as one sampler over the concatenated partitions.
// Inputs are unchanged; the caller owns the new handle.
enum SsStatus ss_reservoir_merge(const struct SsReservoir *a,
                                 const struct SsReservoir *b,
                                 uint64_t seed,
                                 struct SsReservoir **out);

// Create a sequential sampler for a stream of `total` elements.
// AlgORDWSWR needs a weight total; use `ss_sequential_new_weighted`.
enum SsStatus ss_sequential_new_count(enum SsSequentialMethod method,
                                      uint64_t k,
                                      uint64_t total,
                                      uint64_t seed,
                                      struct SsSequential **out);

// Create a weighted sequential sampler for a stream whose weights sum
// to `total_weight`; AlgORDWSWR is the one weighted sequential method.
// Requesting a without-replacement method here is the impossible
// weighted-sequential-without-replacement combination and yields
// `Unsupported`.
enum SsStatus ss_sequential_new_weighted(enum SsSequentialMethod method,
                                         uint64_t k,
                                         double total_weight,
                                         uint64_t seed,
                                         struct SsSequential **out);

// Release a sequential handle; null is a no-op.
void ss_sequential_free(struct SsSequential *state);

// Total multiplicity still to emit.
uint64_t ss_sequential_remaining(const struct SsSequential *state);

// Next skip instruction for count-driven methods (AlgD,
// AlgHiddenShuffle, AlgORDSWR): pass over `skip` elements, then select
// the next element `multiplicity` times. Returns `Done` once the sample
// is complete and `WrongDriver` for AlgORDWSWR.
enum SsStatus ss_sequential_next_skip(struct SsSequential *state,
                                      uint64_t *skip,
                                      uint64_t *multiplicity);

// Advance a weighted sequential sampler past one element of the given
// weight; `multiplicity` receives how many draws selected it (0 means
// skipped). Returns `Done` once the sample is complete and
// `WrongDriver` for count-driven methods.
enum SsStatus ss_sequential_offer_weight(struct SsSequential *state,
                                         double weight,
                                         uint64_t *multiplicity);

// Library version as a static NUL-terminated string.
const char *ss_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STREAMSAMPLE_H */
