#ifndef IRREDCERT_H
#define IRREDCERT_H

#include <stdbool.h>
#include <stdint.h>

/**
 * Result codes shared by all fallible functions.
 */
typedef enum IcStatus {
  IC_STATUS_OK = 0,
  /**
   * `ic_certify` found a proper factor.
   */
  IC_STATUS_REDUCIBLE = 1,
  /**
   * `ic_certify` ran out of budget.
   */
  IC_STATUS_INCONCLUSIVE = 2,
  /**
   * `ic_verify` rejected the certificate.
   */
  IC_STATUS_REJECTED = 3,
  IC_STATUS_NULL_POINTER = 4,
  IC_STATUS_INVALID_UTF8 = 5,
  IC_STATUS_PARSE_ERROR = 6,
  /**
   * Input outside the domain of the operation (zero or constant polynomial).
   */
  IC_STATUS_DOMAIN_ERROR = 7,
  /**
   * An internal panic was caught at the boundary.
   */
  IC_STATUS_INTERNAL = 8,
} IcStatus;

/**
 * Opaque certificate document handle.
 */
typedef struct IcCertificate IcCertificate;

/**
 * Opaque polynomial handle.
 */
typedef struct IcPoly IcPoly;

/**
 * Search parameters for [`ic_certify`]. Obtain defaults from
 * [`ic_config_default`].
 */
typedef struct IcConfig {
  uint64_t seed;
  uint64_t max_iterations;
  uint64_t smooth_bound;
  uint32_t max_graeffe;
  bool use_transforms;
  bool strict_primality;
  uint32_t thread_count;
} IcConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on this thread.
 */
const char *ic_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ic_version(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not yet freed.
 */
void ic_string_free(char *s);

/**
 * Parse a polynomial expression (`"x^4+1"`) or coefficient list
 * (`"[1,0,0,0,1]"`).
 *
 * # Safety
 * `text` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum IcStatus ic_poly_parse(const char *text, struct IcPoly **out);

/**
 * # Safety
 * `p` must be null or a handle from this library not yet freed.
 */
void ic_poly_free(struct IcPoly *p);

/**
 * Degree of the polynomial, or -1 for the zero polynomial or a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
int64_t ic_poly_degree(const struct IcPoly *p);

/**
 * Human-readable form of the polynomial, or null for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
char *ic_poly_to_string(const struct IcPoly *p);

/**
 * Default search parameters.
 */
struct IcConfig ic_config_default(void);

/**
 * Search for a certificate.
 *
 * Returns `IC_STATUS_OK` and stores a certificate in `*out_cert`, or
 * `IC_STATUS_REDUCIBLE` and stores a proper factor in `*out_factor` (when
 * `out_factor` is non-null), or `IC_STATUS_INCONCLUSIVE`. A null `config`
 * selects the defaults.
 *
 * # Safety
 * `poly` must be a live handle; `config` null or valid; `out_cert` writable;
 * `out_factor` null or writable.
 */
enum IcStatus ic_certify(const struct IcPoly *poly,
                         const struct IcConfig *config,
                         struct IcCertificate **out_cert,
                         struct IcPoly **out_factor);

/**
 * Parse a certificate document from its JSON text.
 *
 * # Safety
 * `text` must be null or NUL-terminated; `out` must be null or writable.
 */
enum IcStatus ic_certificate_parse(const char *text, struct IcCertificate **out);

/**
 * Canonical JSON text of the certificate, or null for a null handle.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
char *ic_certificate_serialize(const struct IcCertificate *cert);

/**
 * Kind of the outermost certificate (`"linear"`, `"degree_analysis"`,
 * `"lpfw"` or `"transform"`) as a static string, or null for a null handle.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
const char *ic_certificate_kind(const struct IcCertificate *cert);

/**
 * # Safety
 * `cert` must be null or a handle from this library not yet freed.
 */
void ic_certificate_free(struct IcCertificate *cert);

/**
 * Check `cert` against `poly`. Returns `IC_STATUS_OK` on acceptance and
 * `IC_STATUS_REJECTED` otherwise; the error text starts with the name of the
 * failed check.
 *
 * # Safety
 * `poly` and `cert` must be live handles.
 */
enum IcStatus ic_verify(const struct IcPoly *poly, const struct IcCertificate *cert, bool strict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRREDCERT_H */
