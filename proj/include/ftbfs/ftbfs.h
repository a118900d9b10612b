#ifndef FTBFS_FTBFS_H
#define FTBFS_FTBFS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FTBFS_API __declspec(dllexport)
#else
#define FTBFS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ftbfs_graph ftbfs_graph;
typedef struct ftbfs_structure ftbfs_structure;
typedef struct ftbfs_report ftbfs_report;
typedef struct ftbfs_lb_instance ftbfs_lb_instance;

typedef enum ftbfs_status {
  FTBFS_OK = 0,
  FTBFS_INVALID_ARGUMENT = 1,
  FTBFS_PARSE = 2,
  FTBFS_INFEASIBLE = 3,
  FTBFS_IO = 4,
  FTBFS_INTERNAL = 5
} ftbfs_status;

/* Message of the last failed call on this thread; never NULL. */
FTBFS_API const char* ftbfs_last_error(void);
FTBFS_API const char* ftbfs_version(void);
/* Releases strings returned through char** out-parameters. */
FTBFS_API void ftbfs_string_free(char* s);

/* graphs */
FTBFS_API ftbfs_status ftbfs_graph_load(const char* path, ftbfs_graph** out);
FTBFS_API ftbfs_status ftbfs_graph_parse(const char* text, size_t length, ftbfs_graph** out);
FTBFS_API ftbfs_status ftbfs_graph_write(const ftbfs_graph* g, const char* path);
FTBFS_API size_t ftbfs_graph_vertex_count(const ftbfs_graph* g);
FTBFS_API size_t ftbfs_graph_edge_count(const ftbfs_graph* g);
FTBFS_API ftbfs_status ftbfs_graph_edge(const ftbfs_graph* g, uint32_t id, uint32_t* u, uint32_t* v);
FTBFS_API void ftbfs_graph_free(ftbfs_graph* g);

/* construction */
typedef struct ftbfs_build_options {
  uint32_t source;
  double epsilon;
  int baseline;              /* T0 plus every uncovered last edge */
  int force_eps_machinery;   /* run the phases even for epsilon >= 1/2 */
  int s1_distinct_against_h; /* phase S1 counts only edges new to H */
  unsigned threads;          /* 0: all available */
} ftbfs_build_options;

typedef struct ftbfs_stats {
  size_t b;
  size_t r;
  uint32_t k_eps;
  size_t phase_s1_added;
  size_t phase_s2_added;
  size_t glue_added;
  uint32_t s1_iterations;
  size_t s1_leftover;
  size_t max_selection;
  size_t uncovered_pairs;
  double wall_ms;
} ftbfs_stats;

FTBFS_API void ftbfs_build_options_init(ftbfs_build_options* options);
FTBFS_API ftbfs_status ftbfs_build(const ftbfs_graph* g, const ftbfs_build_options* options, ftbfs_structure** out);
FTBFS_API ftbfs_status ftbfs_structure_load(const ftbfs_graph* g, const char* path, ftbfs_structure** out);
FTBFS_API ftbfs_status ftbfs_structure_parse(const ftbfs_graph* g, const char* text, size_t length,
                                             ftbfs_structure** out);
/* Sorted-key JSON; wall_ms is 0 unless with_timing. */
FTBFS_API ftbfs_status ftbfs_structure_to_json(const ftbfs_structure* s, int with_timing, char** out);
FTBFS_API ftbfs_status ftbfs_structure_stats(const ftbfs_structure* s, ftbfs_stats* out);
FTBFS_API uint32_t ftbfs_structure_source(const ftbfs_structure* s);
/* Copy up to capacity edge ids; return the total count. */
FTBFS_API size_t ftbfs_structure_backup(const ftbfs_structure* s, uint32_t* ids, size_t capacity);
FTBFS_API size_t ftbfs_structure_reinforced(const ftbfs_structure* s, uint32_t* ids, size_t capacity);
FTBFS_API void ftbfs_structure_free(ftbfs_structure* s);

/* verification */
typedef struct ftbfs_verify_options {
  double sample; /* fraction of failures checked, in (0,1] */
  uint64_t seed;
  const uint32_t* failures; /* optional explicit failure edge ids */
  size_t failure_count;
  int naive;
  unsigned threads;
} ftbfs_verify_options;

FTBFS_API void ftbfs_verify_options_init(ftbfs_verify_options* options);
/* sources may be NULL to use the structure's own source. */
FTBFS_API ftbfs_status ftbfs_verify(const ftbfs_graph* g, const ftbfs_structure* s, const uint32_t* sources,
                                    size_t source_count, const ftbfs_verify_options* options, ftbfs_report** out);
FTBFS_API int ftbfs_report_ok(const ftbfs_report* r);
FTBFS_API int ftbfs_report_partial(const ftbfs_report* r);
FTBFS_API size_t ftbfs_report_violation_count(const ftbfs_report* r);
FTBFS_API size_t ftbfs_report_edges_checked(const ftbfs_report* r);
FTBFS_API ftbfs_status ftbfs_report_violation_json(const ftbfs_report* r, size_t index, char** out);
FTBFS_API ftbfs_status ftbfs_report_to_json(const ftbfs_report* r, int with_timing, char** out);
FTBFS_API void ftbfs_report_free(ftbfs_report* r);

/* lower-bound families */
typedef struct ftbfs_lb_summary {
  uint32_t d;
  uint32_t k;
  size_t sources;
  size_t pi_edges;
  size_t min_fan;
  size_t max_fan;
  size_t bipartite_edges;
} ftbfs_lb_summary;

/* source_count 0 selects the single-source family. On FTBFS_INFEASIBLE,
   *next_feasible_n receives the smallest feasible n >= n, or 0. */
FTBFS_API ftbfs_status ftbfs_lb_generate(size_t n, size_t source_count, double epsilon, ftbfs_lb_instance** out,
                                         size_t* next_feasible_n);
FTBFS_API ftbfs_status ftbfs_lb_load(const char* graph_path, const char* sidecar_path, ftbfs_lb_instance** out);
/* Borrowed; valid until the instance is freed. */
FTBFS_API const ftbfs_graph* ftbfs_lb_graph(const ftbfs_lb_instance* inst);
FTBFS_API ftbfs_status ftbfs_lb_summary_get(const ftbfs_lb_instance* inst, ftbfs_lb_summary* out);
FTBFS_API ftbfs_status ftbfs_lb_sidecar_json(const ftbfs_lb_instance* inst, char** out);
/* Audits a structure over the instance graph; *ok receives the verdict. */
FTBFS_API ftbfs_status ftbfs_lb_audit(const ftbfs_lb_instance* inst, const ftbfs_structure* s, unsigned threads,
                                      int* ok, char** json);
FTBFS_API void ftbfs_lb_instance_free(ftbfs_lb_instance* inst);

#ifdef __cplusplus
}
#endif

#endif
