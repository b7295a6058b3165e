#ifndef HYPERSPARS_H
#define HYPERSPARS_H

/* C interface to the directed hypergraph sparsest-cut solver.
 *
 * Strings returned through char** out-parameters are heap allocated and must
 * be released with hs_string_free. Every function returns an hs_status; on
 * failure hs_last_error() describes the problem for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define HS_API __declspec(dllexport)
#else
#  define HS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hs_status {
    HS_OK = 0,
    HS_ERR_INPUT = 1,         /* bad argument or option */
    HS_ERR_PARSE = 2,         /* malformed DHG text or JSON */
    HS_ERR_SIZE = 3,          /* instance too large for exhaustive search */
    HS_ERR_CERT_REJECTED = 4, /* certificate replay failed */
    HS_ERR_INTERNAL = 5
} hs_status;

typedef struct hs_hypergraph hs_hypergraph;

HS_API const char* hs_version(void);
HS_API const char* hs_last_error(void);
HS_API void hs_string_free(char* s);

HS_API hs_status hs_parse_dhg(const char* text, hs_hypergraph** out);
HS_API hs_status hs_load_dhg_file(const char* path, hs_hypergraph** out);
HS_API void hs_hypergraph_free(hs_hypergraph* h);

HS_API hs_status hs_hypergraph_size(const hs_hypergraph* h, int* n, int* m);
HS_API hs_status hs_serialize_dhg(const hs_hypergraph* h, char** out);

/* Sparsity of the vertex set given by names; result as a double and as "p/q". */
HS_API hs_status hs_sparsity(const hs_hypergraph* h, const char* const* names, size_t count, double* value,
                             char** exact);

/* options_json may be NULL. Writes the report JSON and whether a cut was found. */
HS_API hs_status hs_solve_json(const hs_hypergraph* h, const char* options_json, char** report_json,
                               int* cut_found);

HS_API hs_status hs_exact_json(const hs_hypergraph* h, char** report_json);

/* Generator spec as JSON: n, m, r_max, kappa, w_lo, w_hi, model, balance,
 * inside_w, crossing_w, seed. */
HS_API hs_status hs_generate(const char* spec_json, hs_hypergraph** out);

/* Reduced digraph as JSON. */
HS_API hs_status hs_reduce_json(const hs_hypergraph* h, char** out_json);

/* Replays the certificates in a solver report. h may be NULL to use the
 * instance embedded in the report. HS_ERR_CERT_REJECTED on any failed check;
 * detail_json (optional) receives {"ok", "bullet", "detail", ...}. */
HS_API hs_status hs_check_cert(const char* report_json, const hs_hypergraph* h, char** detail_json);

#ifdef __cplusplus
}
#endif

#endif
