/*
 * cotypelab C API.
 *
 * A thin, stable boundary over the C++ core: every call consumes and
 * produces JSON artifact strings, identified by name on an opaque result
 * handle.  All functions are synchronous and thread-compatible (distinct
 * results may be used from distinct threads; a single lab_result_t is not
 * internally synchronized).
 *
 * Exact rational parameters (phi, theta, q, lp exponents) cross the
 * boundary as strings ("1/16", "3", "inf") so no precision is lost.
 */

#ifndef COTYPELAB_LAB_H
#define COTYPELAB_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LAB_EXPORT __declspec(dllexport)
#else
#define LAB_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define LAB_API_VERSION 1

typedef enum lab_status {
    LAB_OK = 0,
    LAB_ERR_PRECONDITION = 1, /* stated precondition refused; message names it */
    LAB_ERR_INVARIANT = 2,    /* internal invariant violated (a bug, not bad input) */
    LAB_ERR_PARSE = 3,        /* malformed JSON; message carries the byte offset */
    LAB_ERR_SCHEMA = 4,       /* well-formed JSON, wrong shape; message carries the field path */
    LAB_ERR_BUDGET = 5,       /* exhaustive mode would exceed the stated budget */
    LAB_ERR_IO = 6,           /* filesystem failure */
    LAB_ERR_NULL_ARGUMENT = 7,
    LAB_ERR_UNKNOWN = 8
} lab_status_t;

/* Opaque handle owning the artifacts and diagnostics of one call. */
typedef struct lab_result lab_result_t;

LAB_EXPORT const char* lab_version(void);
LAB_EXPORT int lab_api_version(void);
LAB_EXPORT const char* lab_status_name(lab_status_t status);

/* Artifacts produced on success are fetched by name; returns NULL when the
 * artifact is absent.  The string lives as long as the result handle. */
LAB_EXPORT const char* lab_result_artifact(const lab_result_t* result, const char* name);
/* Diagnostics: error text on failure, warnings (one per line) on success. */
LAB_EXPORT const char* lab_result_message(const lab_result_t* result);
LAB_EXPORT void lab_result_free(lab_result_t* result);

/* Every call below allocates *out (also on failure, to carry the message)
 * unless out itself is NULL-checked away.  `options_json` may be NULL or a
 * JSON object; recognized keys are documented per call.  Common keys:
 *   "command"    string embedded in the artifact manifests
 *   "seed"       unsigned integer; fans out to every randomized stage
 */

/* Artifacts: "code", "decoder". */
LAB_EXPORT lab_status_t lab_code_hadamard(int m, const char* options_json, lab_result_t** out);

/* mode: "exhaustive" or "sampled".  budget caps exhaustive case counts; in
 * sampled mode `samples` draws are made (budget when samples == 0).
 * Artifacts: "quality". */
LAB_EXPORT lab_status_t lab_code_quality(const char* code_json, const char* decoder_json,
                                         const char* phi, const char* mode, uint64_t budget,
                                         uint64_t samples, const char* options_json,
                                         lab_result_t** out);

/* Artifacts: "smoothed". */
LAB_EXPORT lab_status_t lab_smooth(const char* code_json, const char* decoder_json, const char* theta,
                                   const char* phi, const char* options_json, lab_result_t** out);

/* Certified upper and lower bounds for one tensor.  options:
 *   "lower"       "rank_one_ascent" | "diagonal_functional" | "entry_functional" | "best"
 *   "materialize" bool: include the full rank-one decomposition
 *   "exploratory" bool: skip the 1/p1+1/p2+1/p3 <= 1 check
 * Artifacts: "norm". */
LAB_EXPORT lab_status_t lab_tensor_norm(const char* tensor_json, const char* p1, const char* p2,
                                        const char* p3, const char* options_json, lab_result_t** out);

/* The certificate pipeline on a smoothed code.  theta may be NULL to reuse
 * the value recorded in the smoothed artifact.  options:
 *   "u_projective" / "u_averaging"  bools: U(eps) strategies (default true)
 *   "witness_entry" / "witness_diagonal" / "witness_ascent"  bools
 * Artifacts: "certificate". */
LAB_EXPORT lab_status_t lab_certify(const char* smoothed_json, const char* p1, const char* p2,
                                    const char* p3, const char* q, const char* theta,
                                    const char* options_json, lab_result_t** out);

/* Named self-check suite; options: "cases" (default 100).
 * Artifacts: "verify".  Status is LAB_OK even when cases fail; inspect the
 * artifact's "failures" field. */
LAB_EXPORT lab_status_t lab_verify_suite(const char* suite, const char* options_json,
                                         lab_result_t** out);

/* CSV summary over certificate artifacts, sorted by (m, q).
 * Artifacts: "csv". */
LAB_EXPORT lab_status_t lab_report_csv(const char* const* certificate_jsons, size_t count,
                                       const char* options_json, lab_result_t** out);

#ifdef __cplusplus
}
#endif

#endif /* COTYPELAB_LAB_H */
