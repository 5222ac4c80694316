#ifndef CLK_CLK_H
#define CLK_CLK_H

#include <stddef.h>
#include <stdint.h>

#if defined(CLK_BUILDING_LIBRARY)
#define CLK_API __attribute__((visibility("default")))
#else
#define CLK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning int returns one of these. */
enum {
    CLK_OK = 0,
    CLK_MISMATCH = 1,
    CLK_INPUT_ERROR = 2,
    CLK_UNSUPPORTED = 3,
    CLK_BAD_MAGIC = 4,
    CLK_TRUNCATED = 5,
    CLK_CHECKSUM = 6,
    CLK_COVER_DEFECT = 7,
    CLK_WRONG_PIECE = 8,
    CLK_PARTITION_TOO_COARSE = 9,
    CLK_STRUCTURAL = 10,
    CLK_INTERNAL = 11
};

typedef struct clk_graph clk_graph;
typedef struct clk_labels clk_labels;

/* Message of the last failing call on this thread, "" if none. */
CLK_API const char* clk_last_error(void);
CLK_API const char* clk_status_name(int status);
/* Frees strings returned through char** out-parameters. */
CLK_API void clk_string_free(char* s);

/* Graphs. Text format: `n <count>`, `vc <v> <color>...`, `e <u> <v> <color>`. */
CLK_API int clk_graph_parse(const char* text, clk_graph** out);
CLK_API int clk_graph_load(const char* path, clk_graph** out);
/* JSON generator spec, e.g. {"kind":"forest_union","n":100,"k":2,"seed":1}. */
CLK_API int clk_graph_generate(const char* spec_json, clk_graph** out);
CLK_API int clk_graph_format(const clk_graph* g, char** text);
/* Unit-interval order as space-separated ids, "" when the graph has none. */
CLK_API int clk_graph_order(const clk_graph* g, char** text);
CLK_API size_t clk_graph_vertex_count(const clk_graph* g);
CLK_API void clk_graph_free(clk_graph* g);

/*
 * Builds labels. options_json keys: scheme (arboricity|expansion|local|
 * general|scattered|counting), plan (text), cover (ball|interval),
 * cover_text, order (array of ids), partition (auto|greedy|isolation),
 * partition_text, labeler (catalog|centroid), modulus, force, alpha_budget,
 * seed. report_json may be null.
 */
CLK_API int clk_build(const clk_graph* g, const char* options_json, clk_labels** out, char** report_json);
/* catalog_path may be null for arboricity labels. */
CLK_API int clk_labels_load(const char* bundle_path, const char* catalog_path, clk_labels** out);
CLK_API int clk_labels_from_bytes(const uint8_t* bundle, size_t bundle_len, const uint8_t* catalog, size_t catalog_len,
                                  clk_labels** out);
CLK_API int clk_labels_save(const clk_labels* labels, const char* bundle_path, const char* catalog_path);
CLK_API int clk_labels_size_report(const clk_labels* labels, char** json);
CLK_API size_t clk_labels_vertex_count(const clk_labels* labels);
/* Scheme name, e.g. "local". */
CLK_API const char* clk_labels_scheme(const clk_labels* labels);
CLK_API void clk_labels_free(clk_labels* labels);

/*
 * Queries answered from labels only. formula is required for arboricity
 * labels and must be null otherwise. sets[i] lists set_sizes[i] ids.
 */
CLK_API int clk_ask(clk_labels* labels, const char* formula, const uint32_t* args, size_t nargs,
                    const uint32_t* const* sets, const size_t* set_sizes, size_t nsets, int* answer);
CLK_API int clk_count(clk_labels* labels, const uint32_t* const* sets, const size_t* set_sizes, size_t nsets,
                      uint64_t* count);
/* Modulus fixed at build time, 0 for exact counts. */
CLK_API uint64_t clk_labels_modulus(const clk_labels* labels);
/* Set argument names in positional order, space separated. */
CLK_API int clk_labels_set_names(const clk_labels* labels, const char* formula, char** names);
/* Set parameters of a formula in positional order, space separated. */
CLK_API int clk_formula_set_names(const char* formula, char** names);
CLK_API uint64_t clk_labels_operations(const clk_labels* labels);

/* Brute-force reference answers on the graph itself. */
CLK_API int clk_oracle_ask(const clk_graph* g, const char* formula, const uint32_t* args, size_t nargs,
                           const uint32_t* const* sets, const size_t* set_sizes, size_t nsets, int* answer);
CLK_API int clk_oracle_count(const clk_graph* g, const char* formula, const uint32_t* const* sets,
                             const size_t* set_sizes, size_t nsets, uint64_t* count);

/*
 * Tooling commands with JSON request and response:
 *   crossval, bench, contrast, corruption, validate_cover,
 *   validate_partition, validate_plan, validate_locality,
 *   validate_bounded, validate_connected, eval_term.
 */
CLK_API int clk_run(const char* command, const char* request_json, char** response_json);

#ifdef __cplusplus
}
#endif

#endif
