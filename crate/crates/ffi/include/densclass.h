#ifndef DENSCLASS_H
#define DENSCLASS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  DC_STATUS_INVALID_ARGUMENT = 2,
  DC_STATUS_UNKNOWN_RULE = 3,
  DC_STATUS_NON_FIXED_BACKGROUND = 4,
  DC_STATUS_TOO_LARGE = 5,
  DC_STATUS_PARSE = 6,
  DC_STATUS_ALPHA_NOT_LESS_THAN_ONE = 7,
  DC_STATUS_DOMAIN_MISMATCH = 8,
  DC_STATUS_BUFFER_TOO_SMALL = 9,
  DC_STATUS_IO = 10,
  DC_STATUS_INTERNAL = 11,
} DcStatus;

typedef enum DcVerdict {
  DC_VERDICT_FIXED0 = 0,
  DC_VERDICT_FIXED1 = 1,
  DC_VERDICT_UNRESOLVED = 2,
} DcVerdict;

/*
 A configuration on a ring of `n` cells.
 */
typedef struct DcRing DcRing;

/*
 A cellular automaton rule.
 */
typedef struct DcRule DcRule;

typedef struct DcTrialResult {
  enum DcVerdict verdict;
  /*
   -1 when unresolved.
   */
  int64_t fixation_time;
  uint64_t initial_ones;
  /*
   1 correct, 0 incorrect, -1 no strict majority.
   */
  int32_t correct;
} DcTrialResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until
 the next failing call on the same thread.
 */
const char *dc_last_error(void);

/*
 Identifier of the random generator and seed-splitting scheme.
 */
const char *dc_prng_id(void);

/*
 Looks up a built-in rule (`gkl`, `traffic`, `modified_traffic`,
 `smoothing`, `and_erosion`, `or_erosion`, `ruleN`).

 # Safety
 `name` must be a NUL-terminated string and `out` writable.
 */
enum DcStatus dc_rule_by_name(const char *name, struct DcRule **out_rule);

/*
 Builds a rule of `radius` from its `2^(2 radius + 1)` outputs (0/1),
 indexed with the leftmost neighbour as the most significant bit.

 # Safety
 `table` must point to `len` bytes and `out` be writable.
 */
enum DcStatus dc_rule_from_table(uint32_t radius,
                                 const uint8_t *table,
                                 uintptr_t len,
                                 struct DcRule **out_rule);

/*
 The rule with 0 and 1 exchanged and space reflected.

 # Safety
 `rule` must be a live handle and `out` writable.
 */
enum DcStatus dc_rule_conjugate(const struct DcRule *rule, struct DcRule **out_rule);

/*
 # Safety
 `rule` must be a live handle and `out_radius` writable.
 */
enum DcStatus dc_rule_radius(const struct DcRule *rule, uint32_t *out_radius);

/*
 Copies the lookup table into `buf`. `*out_len` receives the table
 length; with a short buffer the call fails with
 `DC_STATUS_BUFFER_TOO_SMALL` and writes only `*out_len`.

 # Safety
 `rule` must be a live handle, `buf` hold `cap` bytes, `out_len` be
 writable.
 */
enum DcStatus dc_rule_table(const struct DcRule *rule,
                            uint8_t *buf,
                            uintptr_t cap,
                            uintptr_t *out_len);

/*
 # Safety
 `rule` must be null or a handle not yet freed.
 */
void dc_rule_free(struct DcRule *rule);

/*
 A ring from `n` cells given as 0/1 bytes.

 # Safety
 `bits` must point to `n` bytes and `out_ring` be writable.
 */
enum DcStatus dc_ring_from_bits(const uint8_t *bits, uintptr_t n, struct DcRing **out_ring);

/*
 A Bernoulli(p) ring of `n` cells from the stream of `seed`.

 # Safety
 `out_ring` must be writable.
 */
enum DcStatus dc_ring_sample(uintptr_t n, double p, uint64_t seed, struct DcRing **out_ring);

/*
 # Safety
 `ring` must be a live handle and `out_len` writable.
 */
enum DcStatus dc_ring_len(const struct DcRing *ring, uintptr_t *out_len);

/*
 # Safety
 `ring` must be a live handle and `out_count` writable.
 */
enum DcStatus dc_ring_count_ones(const struct DcRing *ring, uintptr_t *out_count);

/*
 Copies the cells as 0/1 bytes into `buf`, which must hold the ring
 length.

 # Safety
 `ring` must be a live handle and `buf` hold `cap` bytes.
 */
enum DcStatus dc_ring_bits(const struct DcRing *ring, uint8_t *buf, uintptr_t cap);

/*
 A new ring holding `rule` applied `steps` times to `ring`.

 # Safety
 `ring` and `rule` must be live handles and `out_ring` writable.
 */
enum DcStatus dc_ring_evolve(const struct DcRing *ring,
                             const struct DcRule *rule,
                             uintptr_t steps,
                             struct DcRing **out_ring);

/*
 # Safety
 `ring` must be null or a handle not yet freed.
 */
void dc_ring_free(struct DcRing *ring);

/*
 Steps until the configuration equal to `background` except at the
 `count` sites in `errors` is uniform again. `*out_time` is -1 if that
 does not happen within `t_max` steps.

 # Safety
 `rule` must be a live handle, `errors` hold `count` values and
 `out_time` be writable.
 */
enum DcStatus dc_washout_time(const struct DcRule *rule,
                              uint8_t background,
                              const int64_t *errors,
                              uintptr_t count,
                              uintptr_t t_max,
                              int64_t *out_time);

/*
 Checks every perturbation of diameter `1..=n_max` on `background`
 washes out within `m n` steps. If `out_max_times` is not null it
 receives `n_max` worst-case times (-1 where a pattern never washed
 out).

 # Safety
 `rule` must be a live handle, `out_pass` writable and `out_max_times`
 null or room for `n_max` values.
 */
enum DcStatus dc_verify_linear_eroder(const struct DcRule *rule,
                                      uint8_t background,
                                      uintptr_t m,
                                      uintptr_t n_max,
                                      bool *out_pass,
                                      int64_t *out_max_times);

/*
 Runs erasure stages `1..=l_max` on the sites `members` inside
 `[window_lo, window_hi]`. `outside_unknown` selects whether sites
 beyond the window are unknown (1) or empty (0).
 `out_residual_counts` receives `|E_l|` for `l = 0..=l_max`,
 `out_separation_ok` whether all erased islands are pairwise well
 separated, and `out_cover_separation_ok` (may be null) the same for the
 islands not contained in another one.

 # Safety
 `members` must hold `count` values, `out_residual_counts` room for
 `l_max + 1` values, `out_separation_ok` be writable and
 `out_cover_separation_ok` null or writable.
 */
enum DcStatus dc_erase(const int64_t *members,
                       uintptr_t count,
                       int64_t window_lo,
                       int64_t window_hi,
                       uint64_t k,
                       uint64_t l_max,
                       uint8_t outside_unknown,
                       uint64_t *out_residual_counts,
                       bool *out_separation_ok,
                       bool *out_cover_separation_ok);

/*
 The threshold `1 / (2k)^2` as a reduced fraction.

 # Safety
 `out_num` and `out_den` must be writable.
 */
enum DcStatus dc_p_threshold(uint64_t k, uint64_t *out_num, uint64_t *out_den);

/*
 Whether the tree count from the recursion stays below
 `(2k)^(2^(m+1))`.

 # Safety
 `out_holds` must be writable.
 */
enum DcStatus dc_tree_count_closed_form_holds(uint64_t k, uint32_t m, bool *out_holds);

/*
 One classification trial on an odd ring of `n` cells.

 # Safety
 `rule` must be a live handle and `out_result` writable.
 */
enum DcStatus dc_run_trial(const struct DcRule *rule,
                           uintptr_t n,
                           double p,
                           uintptr_t t_max,
                           uint64_t seed,
                           struct DcTrialResult *out_result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DENSCLASS_H */
