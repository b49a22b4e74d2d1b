#ifndef CSM_CSM_H
#define CSM_CSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSM_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CSM_API __attribute__((visibility("default")))
#else
#define CSM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csm_status {
  CSM_OK = 0,
  CSM_ERR_ARGUMENT = 1, /* null pointer or bad option value */
  CSM_ERR_IO = 2,
  CSM_ERR_PARSE = 3,
  CSM_ERR_STREAM = 4, /* op inconsistent with the current graph */
  CSM_ERR_QUERY = 5,
  CSM_ERR_LIMIT = 6,
  CSM_ERR_INPUT = 7, /* other invalid input, e.g. duplicate vertex id */
  CSM_ERR_MEMORY = 8,
  CSM_ERR_INTERNAL = 9
} csm_status;

typedef struct csm_engine csm_engine;

typedef struct csm_options {
  int homomorphism; /* 0 = isomorphism */
  int exact_order;  /* 0 = estimated sizes */
  int leaf_only;    /* 0 = isolated-vertex postponement */
  int edge_labels;
  int directed;
} csm_options;

typedef struct csm_op_result {
  int positive; /* 1 for '+', 0 for '-' */
  uint64_t matches;
  uint64_t updated_vertices;
  uint64_t visited_edges;
  uint64_t changed_edges;
  uint64_t extensions;
} csm_op_result;

/* One match: parallel arrays of external query and data vertex ids. */
typedef void (*csm_match_fn)(void* user, const uint64_t* query_ids, const uint64_t* data_ids,
                             size_t count);

CSM_API void csm_options_init(csm_options* options);

/* Message for the last failing call on this thread ("" if none). */
CSM_API const char* csm_last_error(void);

CSM_API csm_status csm_engine_create(const char* graph_text, const char* query_text,
                                     const csm_options* options, csm_engine** out);
CSM_API csm_status csm_engine_create_from_files(const char* graph_path, const char* query_path,
                                                const csm_options* options, csm_engine** out);
CSM_API void csm_engine_destroy(csm_engine* engine);

/* Applies one stream line ("+ 1 2", "- 1 2", "v+ 7 A", "v- 7"). `on_match`
   may be NULL to count only. */
CSM_API csm_status csm_engine_apply(csm_engine* engine, const char* op_line,
                                    csm_match_fn on_match, void* user, csm_op_result* result);

CSM_API csm_status csm_engine_size(const csm_engine* engine, size_t* vertices, size_t* edges);

/* Writes the query DAG as text: "root u<id>" then one "u<a> u<b>" line per
   edge. `*needed` gets the full length including the terminator. */
CSM_API csm_status csm_engine_dump_dag(const csm_engine* engine, char* buffer, size_t capacity,
                                       size_t* needed);

typedef struct csm_run_config {
  const char* graph_path;
  const char* stream_path;
  const char* query_path;
  const char* report_path; /* NULL or "" writes to stdout */
  csm_options options;
  int enumerate;
  int stats;
  double time_limit_seconds; /* 0 = none */
} csm_run_config;

typedef struct csm_run_summary {
  uint64_t ops;
  uint64_t positive;
  uint64_t negative;
  int truncated;
  double elapsed_seconds;
} csm_run_summary;

CSM_API void csm_run_config_init(csm_run_config* config);
CSM_API csm_status csm_run(const csm_run_config* config, csm_run_summary* summary);

typedef struct csm_workload_params {
  uint64_t seed;
  uint32_t vertices;
  uint32_t labels;
  uint32_t edges;
  uint32_t ops;
  double deletion_rate; /* deletions per 100 insertions */
  uint32_t query_edges;
  uint32_t edge_labels; /* 0 = unlabeled edges */
  int directed;
} csm_workload_params;

CSM_API void csm_workload_params_init(csm_workload_params* params);
CSM_API csm_status csm_generate_workload(const csm_workload_params* params,
                                         const char* graph_path, const char* stream_path,
                                         const char* query_path);

/* Brute-force reference run with the same report format (matches sorted).
   Small inputs only. */
CSM_API csm_status csm_oracle_run(const csm_run_config* config, csm_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
