/* secnet C API: secure network coding under active attacks. */

#ifndef SECNET_H
#define SECNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum SnStatus {
  /**
   * Success.
   */
  SN_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SN_NULL_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8.
   */
  SN_INVALID_UTF8 = 2,
  /**
   * Parsing or validation failed; see `secnet_last_error`.
   */
  SN_PARSE_ERROR = 3,
  /**
   * A computation rejected its inputs; see `secnet_last_error`.
   */
  SN_COMPUTE_ERROR = 4,
} SnStatus;

/**
 * An acyclic linear network with ordered edges (opaque).
 */
typedef struct SnNetwork SnNetwork;

/**
 * A wiretap/injection edge placement (opaque).
 */
typedef struct SnPlacement SnPlacement;

/**
 * Table-I channel parameters: ranks m0..m2 and dimensions m3..m6.
 */
typedef struct SnChannelParams {
  uint32_t m0;
  uint32_t m1;
  uint32_t m2;
  uint32_t m3;
  uint32_t m4;
  uint32_t m5;
  uint32_t m6;
} SnChannelParams;

/**
 * Achievable rates for given channel parameters.
 */
typedef struct SnRates {
  /**
   * m0 - m1 - m2 when achievable, else 0.
   */
  uint32_t robust_secure;
  /**
   * m1 + m2 < m0.
   */
  bool robust_achievable;
  /**
   * m0 - m2 when achievable, else 0.
   */
  uint32_t secrecy_only;
  /**
   * m2 < m0.
   */
  bool secrecy_achievable;
} SnRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the current thread's last error message (NUL-terminated, possibly
 * truncated) into `buf` and returns the full message length in bytes.
 *
 * # Safety
 * `buf` must point to `len` writable bytes, or be null (then only the
 * length is returned).
 */
uintptr_t secnet_last_error(char *buf, uintptr_t len);

/**
 * Parses a network description (the line-oriented file format) into a
 * handle. Adversary lines in the text are kept with the network and merged
 * into every placement query.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 * The returned handle must be released with [`secnet_network_free`].
 */
enum SnStatus secnet_network_parse(const char *text, struct SnNetwork **out);

/**
 * Builds the circle QKD routing network over GF(2) with 1-based node
 * indices for `alice` and `bob`.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with
 * [`secnet_network_free`].
 */
enum SnStatus secnet_circle_network(uint32_t k,
                                    uint32_t l,
                                    uint32_t alice,
                                    uint32_t bob,
                                    struct SnNetwork **out);

/**
 * Releases a network handle. Null is ignored.
 *
 * # Safety
 * `net` must have come from this library and not been freed before.
 */
void secnet_network_free(struct SnNetwork *net);

/**
 * Converts attacked intermediate nodes (NUL-terminated names) into an edge
 * placement, merged with any adversary carried by the network file.
 *
 * # Safety
 * `names` must point to `count` valid NUL-terminated strings; `out` must be
 * valid. Release the handle with [`secnet_placement_free`].
 */
enum SnStatus secnet_placement_from_nodes(const struct SnNetwork *net,
                                          const char *const *names,
                                          uintptr_t count,
                                          struct SnPlacement **out);

/**
 * Builds a placement from explicit 1-based edge index lists.
 *
 * # Safety
 * `wiretap`/`inject` must point to the stated numbers of entries (null is
 * fine for empty lists); `out` must be valid.
 */
enum SnStatus secnet_placement_from_edges(const uintptr_t *wiretap,
                                          uintptr_t wiretap_len,
                                          const uintptr_t *inject,
                                          uintptr_t inject_len,
                                          struct SnPlacement **out);

/**
 * Releases a placement handle. Null is ignored.
 *
 * # Safety
 * `adv` must have come from this library and not been freed before.
 */
void secnet_placement_free(struct SnPlacement *adv);

/**
 * Derives the transfer matrices and fills in the channel parameters. A null
 * placement means the adversary carried by the network file (possibly
 * empty).
 *
 * # Safety
 * `net` and `out` must be valid; `adv` may be null.
 */
enum SnStatus secnet_channel_params(const struct SnNetwork *net,
                                    const struct SnPlacement *adv,
                                    struct SnChannelParams *out);

/**
 * Achievable-rate arithmetic from channel parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SnStatus secnet_rates(uint32_t m0, uint32_t m1, uint32_t m2, struct SnRates *out);

/**
 * Evaluates the privacy-amplification leakage bound (the smaller of the two
 * displayed forms) for parameters `s in (0,1]`, output length `kbar_n`,
 * input length `k_n`, block length `l_n`, wiretap rank `m2`, field size
 * `q`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SnStatus secnet_leakage_bound(double s,
                                   uint32_t kbar_n,
                                   uint32_t k_n,
                                   uint32_t l_n,
                                   uint32_t m2,
                                   uint64_t q,
                                   double *out);

/**
 * Exhaustively verifies the universal hash collision bound for the modified
 * Toeplitz family over GF(q); writes the worst collision probability and
 * whether it meets `q^-kbar_n`.
 *
 * # Safety
 * `max_collision` and `pass` must be valid pointers.
 */
enum SnStatus secnet_universal2_check(uint32_t k_n,
                                      uint32_t kbar_n,
                                      uint64_t q,
                                      uint64_t cap,
                                      double *max_collision,
                                      bool *pass);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SECNET_H */
