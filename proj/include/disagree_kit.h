/* disagree_kit: C API for the learning-with-disagreements evaluation toolkit.
 *
 * All objects are opaque handles created by dk_* constructors and released
 * with their dk_*_free function. Functions return DK_OK on success or a
 * stable error code; dk_last_error() returns a thread-local message for the
 * most recent failure on the calling thread. Returned strings are owned by
 * the caller and released with dk_string_free().
 */
#ifndef DISAGREE_KIT_H
#define DISAGREE_KIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dk_status {
  DK_OK = 0,
  DK_E_MALFORMED_JSON = 1,
  DK_E_SCHEMA_VIOLATION = 2,
  DK_E_DUPLICATE_ID = 3,
  DK_E_INVALID_PROBABILITY = 4,
  DK_E_UNKNOWN_CATEGORY = 5,
  DK_E_MIXED_KINDS = 6,
  DK_E_IO_FAILURE = 7,
  DK_E_ID_MISMATCH = 8,
  DK_E_TASK_MISMATCH = 9,
  DK_E_EMPTY_CANDIDATES = 10,
  DK_E_EMPTY_GOLD = 11,
  DK_E_NO_VALID_VOTES = 12,
  DK_E_GRID_TOO_LARGE = 13,
  DK_E_MISSING_ANNOTATOR_COUNT = 14,
  DK_E_DEGENERATE_ANCHORS = 15,
  DK_E_UNSUPPORTED_TASK = 16,
  DK_E_MIXED_MODES = 17,
  DK_E_INVALID_ARGUMENT = 18,
  DK_E_INTERNAL = 19
} dk_status;

typedef enum dk_task { DK_TASK1 = 1, DK_TASK2 = 2, DK_TASK3 = 3 } dk_task;
typedef enum dk_kind { DK_KIND_SOFT = 0, DK_KIND_HARD = 1 } dk_kind;
typedef enum dk_mode {
  DK_MODE_SOFT_SOFT = 0,
  DK_MODE_HARD_HARD = 1,
  DK_MODE_HARD_SOFT = 2
} dk_mode;
typedef enum dk_baseline {
  DK_BASELINE_GOLD = 0,
  DK_BASELINE_MAJORITY = 1,
  DK_BASELINE_MINORITY = 2
} dk_baseline;
typedef enum dk_table_format { DK_TABLE_TSV = 0, DK_TABLE_MARKDOWN = 1 } dk_table_format;

typedef struct dk_dataset dk_dataset;
typedef struct dk_run dk_run;
typedef struct dk_gold dk_gold;
typedef struct dk_report dk_report;

typedef struct dk_metric_config {
  double alpha1;
  double alpha2;
  double beta;
  double ce_epsilon;
  int f1_include_no;
} dk_metric_config;

typedef struct dk_synth_params {
  int items;
  int annotators;
  double agreement;
  double lang_mix;
  double unknown_rate;
  uint64_t seed;
} dk_synth_params;

const char* dk_version(void);
const char* dk_status_name(dk_status status);
const char* dk_last_error(void);
void dk_string_free(char* s);

/* Data-parallel worker count; outputs never depend on it. The initial value
 * comes from DISAGREE_KIT_THREADS, defaulting to 1. */
void dk_set_threads(int n);
int dk_threads(void);

dk_metric_config dk_metric_config_default(void);
dk_synth_params dk_synth_params_default(void);

/* ---- datasets ---- */
dk_status dk_dataset_load(const char* path, dk_dataset** out);
dk_status dk_dataset_synth(const dk_synth_params* params, dk_dataset** out);
dk_status dk_dataset_save(const dk_dataset* ds, const char* path);
size_t dk_dataset_size(const dk_dataset* ds);
void dk_dataset_free(dk_dataset* ds);

/* ---- runs ---- */
/* expect_task = 0 accepts any task. */
dk_status dk_run_load(const char* path, int expect_task, dk_run** out);
dk_status dk_run_save(const dk_run* run, const char* path);
dk_status dk_run_set_name(dk_run* run, const char* name);
const char* dk_run_name(const dk_run* run); /* borrowed, lives with the run */
int dk_run_task(const dk_run* run);
int dk_run_kind(const dk_run* run);
size_t dk_run_size(const dk_run* run);
void dk_run_free(dk_run* run);

/* ---- gold standards ---- */
/* task3_threshold applies to task-3 hard derivation; pass a negative value
 * for the default (0.5). */
dk_status dk_gold_from_dataset(const dk_dataset* ds, int task, double task3_threshold,
                               dk_gold** out);
dk_status dk_gold_from_run(const dk_run* soft_run, double task3_threshold, dk_gold** out);
/* Sniffs the file: a run file rebuilds gold from its soft values, anything
 * else is parsed as a dataset. */
dk_status dk_gold_load(const char* path, int task, double task3_threshold, dk_gold** out);
size_t dk_gold_size(const dk_gold* gold);
size_t dk_gold_warning_count(const dk_gold* gold);
/* JSON array of {"id","reason"} for items excluded from the gold. */
dk_status dk_gold_warnings_json(const dk_gold* gold, char** out);
dk_status dk_gold_to_run(const dk_gold* gold, dk_kind kind, const char* name, dk_run** out);
dk_status dk_baseline_run(const dk_gold* gold, dk_baseline which, dk_kind kind, dk_run** out);
void dk_gold_free(dk_gold* gold);

/* ---- pipeline operations ---- */
/* Weighted mean of soft runs; weights = NULL means uniform. */
dk_status dk_ensemble(const dk_run* const* runs, size_t count, const double* weights,
                      dk_run** out);
/* Snaps predictions onto the feasible grid. ds may be NULL; items without an
 * annotator count use global_n. fallback_items (optional) counts task-3 items
 * adjusted by per-category rounding because the lattice exceeded the cap. */
dk_status dk_adjust(const dk_run* run, const dk_dataset* ds, int global_n,
                    size_t* fallback_items, dk_run** out);
dk_status dk_harden(const dk_run* run, double task3_threshold, dk_run** out);
dk_status dk_select_best(const dk_run* const* candidates, size_t count, const dk_gold* gold,
                         const char* metric, dk_mode mode, const dk_metric_config* cfg,
                         size_t* best_index);

/* ---- evaluation ---- */
dk_status dk_evaluate(const dk_run* pred, const dk_gold* gold, dk_mode mode,
                      const dk_metric_config* cfg, dk_report** out);
/* Looks up a metric by key ("icm-soft", "icm-soft-norm", "cross-entropy",
 * "icm-hard", "icm-hard-norm", "f1"). */
dk_status dk_report_metric(const dk_report* report, const char* name, double* out);
int dk_report_task(const dk_report* report);
int dk_report_mode(const dk_report* report);
const char* dk_report_run_name(const dk_report* report); /* borrowed */
dk_status dk_report_set_provenance(dk_report* report, const char* key, const char* value);
/* Borrowed value for a provenance key, or NULL when absent. */
const char* dk_report_provenance(const dk_report* report, const char* key);
dk_status dk_report_table(const dk_report* const* reports, size_t count,
                          dk_table_format format, char** out);
dk_status dk_reports_save(const dk_report* const* reports, size_t count, const char* path);
dk_status dk_reports_load(const char* path, dk_report*** out, size_t* out_count);
void dk_reports_free(dk_report** reports, size_t count);
void dk_report_free(dk_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DISAGREE_KIT_H */
