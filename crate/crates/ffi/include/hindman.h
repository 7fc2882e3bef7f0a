#ifndef HINDMAN_H
#define HINDMAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  HM_SIDE_A = 0,
  HM_SIDE_COMPLEMENT = 1,
} HmSide;

typedef enum {
  HM_STATUS_OK = 0,
  HM_STATUS_NULL_ARGUMENT = 1,
  HM_STATUS_INVALID_INPUT = 2,
  HM_STATUS_NO_WITNESS = 3,
  HM_STATUS_INCONCLUSIVE = 4,
  HM_STATUS_BUFFER_TOO_SMALL = 5,
  HM_STATUS_PANIC = 6,
} HmStatus;

typedef enum {
  HM_VERDICT_REFUTED = 0,
  HM_VERDICT_UNKNOWN = 1,
  HM_VERDICT_VERIFIED = 2,
} HmVerdict;

/**
 * The result of `hm_decide`.
 */
typedef struct HmDecision HmDecision;

/**
 * A family of sets with generator schemas.
 */
typedef struct HmFamily HmFamily;

/**
 * A symbolic set of naturals.
 */
typedef struct HmSet HmSet;

/**
 * Bounded-verification parameters; see [`hm_policy_default`].
 */
typedef struct {
  uint64_t bound;
  size_t min_count;
  double tail_fraction;
  size_t max_f;
  uint64_t inst_bound;
} HmPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next `hm_*` call on the same thread.
 */
const char *hm_last_error(void);

HmPolicy hm_policy_default(void);

/**
 * Parses a predicate such as `n % 3 == 0 && n > 10`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out_set` writable.
 */
HmStatus hm_set_parse(const char *text, HmSet **out_set);

/**
 * # Safety
 * `base` must point to `len` values.
 */
HmStatus hm_set_explicit(const uint64_t *base, size_t len, HmSet **out_set);

/**
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void hm_set_free(HmSet *set);

/**
 * # Safety
 * `set` must be a live handle and `member` writable.
 */
HmStatus hm_set_member(const HmSet *set, uint64_t n, bool *member);

/**
 * Subset sums of `base`, sorted, with 0 unless `nonempty`.
 *
 * # Safety
 * `base` must point to `len` values, `dst` to `cap` slots.
 */
HmStatus hm_finite_sums(const uint64_t *base,
                        size_t len,
                        bool nonempty,
                        uint64_t *dst,
                        size_t cap,
                        size_t *written);

/**
 * The family `{ℕ}`.
 */
HmFamily *hm_family_trivial(void);

/**
 * The cofinite filter generated by the tails.
 */
HmFamily *hm_family_frechet(void);

/**
 * A copy of `family` with `set` appended as a generator.
 *
 * # Safety
 * `family` and `set` must be live handles, `out_family` writable.
 */
HmStatus hm_family_append(const HmFamily *family, const HmSet *set, HmFamily **out_family);

/**
 * # Safety
 * `family` must come from this library and not be used afterwards.
 */
void hm_family_free(HmFamily *family);

/**
 * Bounded finite intersection property. A null `policy` means the defaults.
 *
 * # Safety
 * `family` must be a live handle and `result` writable.
 */
HmStatus hm_fip(const HmFamily *family, const HmPolicy *policy_, HmVerdict *result);

/**
 * Extends `family` until it decides `set` with witnesses of length `m`.
 * `max_nodes == 0` keeps the default search budget. Returns
 * `HM_STATUS_INCONCLUSIVE` when no certificate exists at the bound.
 *
 * # Safety
 * `family` and `set` must be live handles, `out_decision` writable.
 */
HmStatus hm_decide(const HmFamily *family,
                   const HmSet *set,
                   size_t m,
                   const HmPolicy *policy_,
                   size_t max_nodes,
                   HmDecision **out_decision);

/**
 * # Safety
 * `decision` must be a live handle and `side` writable.
 */
HmStatus hm_decision_side(const HmDecision *decision, HmSide *side);

/**
 * The witness `S` for side A; zero elements for side Aᶜ.
 *
 * # Safety
 * `decision` must be a live handle, `dst` must hold `cap` values.
 */
HmStatus hm_decision_witness(const HmDecision *decision,
                             uint64_t *dst,
                             size_t cap,
                             size_t *written);

/**
 * A new handle to the extended family.
 *
 * # Safety
 * `decision` must be a live handle, `out_family` writable.
 */
HmStatus hm_decision_family(const HmDecision *decision, HmFamily **out_family);

/**
 * # Safety
 * `decision` must come from this library and not be used afterwards.
 */
void hm_decision_free(HmDecision *decision);

/**
 * Exact check that every nonempty sum of `seq` lies in `set`.
 *
 * # Safety
 * `set` must be a live handle, `seq` must hold `len` values.
 */
HmStatus hm_verify_set(const HmSet *set, const uint64_t *seq, size_t len, bool *holds);

/**
 * Exact check against color class `color` of a coloring of `[1..n]`,
 * `assignment[i]` being the color of `i + 1`.
 *
 * # Safety
 * `assignment` must hold `n` values, `seq` `len` values.
 */
HmStatus hm_verify_coloring(const uint8_t *assignment,
                            size_t n,
                            uint8_t color,
                            const uint64_t *seq,
                            size_t len,
                            bool *holds);

/**
 * Least `N ≤ max` at which every `k`-coloring of `[1..N]` has a
 * monochromatic `NS(S)`, `|S| = m`. Returns `HM_STATUS_NO_WITNESS` when
 * there is none up to `max`.
 *
 * # Safety
 * `value` must be writable.
 */
HmStatus hm_min_forcing_bound(size_t k, size_t m, uint64_t max, size_t jobs, uint64_t *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HINDMAN_H */
