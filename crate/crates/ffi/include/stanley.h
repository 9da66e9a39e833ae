#ifndef STANLEY_H
#define STANLEY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The nonzero values match the command-line exit codes.
 */
typedef enum StanleyStatus {
  STANLEY_STATUS_OK = 0,
  /**
   * Malformed input, including null pointers.
   */
  STANLEY_STATUS_INPUT_ERROR = 1,
  /**
   * A precondition or domain restriction was violated, or more terms are needed.
   */
  STANLEY_STATUS_PRECONDITION_ERROR = 2,
  /**
   * A memory or search cap was reached.
   */
  STANLEY_STATUS_RESOURCE_ERROR = 3,
  /**
   * An internal consistency check failed.
   */
  STANLEY_STATUS_INCONSISTENCY_ERROR = 4,
  /**
   * The library panicked; the call had no effect.
   */
  STANLEY_STATUS_PANIC = 5,
} StanleyStatus;

/**
 * Opaque handle to a seed set.
 */
typedef struct StanleySeed StanleySeed;

/**
 * Opaque handle to a generated Stanley sequence.
 */
typedef struct StanleySequence StanleySequence;

/**
 * A triadic number `num / 3^den_pow3` in lowest terms.
 */
typedef struct StanleyTriadic {
  int64_t num;
  uint32_t den_pow3;
} StanleyTriadic;

/**
 * An independence certificate.
 */
typedef struct StanleyCertificate {
  size_t horizon;
  uint32_t kappa;
  int64_t lambda;
  uint64_t rho;
  struct StanleyTriadic alpha;
  bool proven;
} StanleyCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *stanley_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *stanley_version(void);

/**
 * Generates the first `count` terms of S(seed).
 *
 * # Safety
 * `seed` must point to `seed_len` readable values; `out` must be valid for writes.
 */
enum StanleyStatus stanley_sequence_generate(const uint64_t *seed,
                                             size_t seed_len,
                                             size_t count,
                                             struct StanleySequence **out);

/**
 * Appends `additional` terms. On a resource error the terms produced so far are kept.
 *
 * # Safety
 * `seq` must be a live handle from [`stanley_sequence_generate`].
 */
enum StanleyStatus stanley_sequence_extend(struct StanleySequence *seq, size_t additional);

/**
 * Number of terms, or 0 for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t stanley_sequence_len(const struct StanleySequence *seq);

/**
 * Pointer to the terms, valid until the handle is extended or freed. Null for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
const uint64_t *stanley_sequence_terms(const struct StanleySequence *seq);

/**
 * Releases a sequence handle. Null is ignored.
 *
 * # Safety
 * `seq` must be null or a live handle, which is invalid afterwards.
 */
void stanley_sequence_free(struct StanleySequence *seq);

/**
 * Certifies the sequence with threshold at most `kmax`.
 *
 * Writes `*found = false` when no certificate exists within the generated terms.
 *
 * # Safety
 * `seq` must be a live handle; `out` and `found` must be valid for writes.
 */
enum StanleyStatus stanley_certify(const struct StanleySequence *seq,
                                   uint32_t kmax,
                                   struct StanleyCertificate *out,
                                   bool *found);

/**
 * ω(seed): the largest integer below max(seed) that is neither in nor covered
 * by the seed, or -1.
 *
 * # Safety
 * `seed` must point to `seed_len` readable values; `omega` must be valid for writes.
 */
enum StanleyStatus stanley_omega(const uint64_t *seed, size_t seed_len, int64_t *omega);

/**
 * The `n`-th term of S(0).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum StanleyStatus stanley_s0_term(uint64_t n, uint64_t *out);

/**
 * Whether the strictly increasing set has no 3-term arithmetic progression.
 *
 * # Safety
 * `set` must point to `len` readable values; `out` must be valid for writes.
 */
enum StanleyStatus stanley_is_three_free(const uint64_t *set, size_t len, bool *out);

/**
 * Builds seed^d_k and its predicted repeat and scaling factors.
 *
 * # Safety
 * `seed` must point to `seed_len` readable values; the three outputs must be
 * valid for writes.
 */
enum StanleyStatus stanley_adk(const uint64_t *seed,
                               size_t seed_len,
                               uint32_t k,
                               int64_t d,
                               struct StanleySeed **out_seed,
                               uint64_t *predicted_rho,
                               struct StanleyTriadic *predicted_alpha);

/**
 * Searches a construction chain from {0} to scaling factor `target` and returns
 * the final seed, its certificate, and the chain depth.
 *
 * # Safety
 * All outputs must be valid for writes.
 */
enum StanleyStatus stanley_target_scaling(struct StanleyTriadic target,
                                          struct StanleySeed **out_seed,
                                          struct StanleyCertificate *out_cert,
                                          size_t *depth);

/**
 * Number of seed elements, or 0 for a null handle.
 *
 * # Safety
 * `seed` must be null or a live handle.
 */
size_t stanley_seed_len(const struct StanleySeed *seed);

/**
 * Pointer to the sorted elements, valid until the handle is freed. Null for a null handle.
 *
 * # Safety
 * `seed` must be null or a live handle.
 */
const uint64_t *stanley_seed_elements(const struct StanleySeed *seed);

/**
 * Releases a seed handle. Null is ignored.
 *
 * # Safety
 * `seed` must be null or a live handle, which is invalid afterwards.
 */
void stanley_seed_free(struct StanleySeed *seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STANLEY_H */
