#ifndef INTERSMELL_H
#define INTERSMELL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsmLearner {
  ISM_LEARNER_RANDOM_FOREST = 0,
  ISM_LEARNER_DECISION_TREE = 1,
  ISM_LEARNER_LOGISTIC_REGRESSION = 2,
  ISM_LEARNER_NAIVE_BAYES = 3,
  ISM_LEARNER_MLP = 4,
  ISM_LEARNER_KNN = 5,
  ISM_LEARNER_SVM = 6,
} IsmLearner;

typedef enum IsmScenario {
  ISM_SCENARIO_S11 = 0,
  ISM_SCENARIO_S12 = 1,
  ISM_SCENARIO_S21 = 2,
  ISM_SCENARIO_S22 = 3,
  ISM_SCENARIO_S31 = 4,
  ISM_SCENARIO_S32 = 5,
  ISM_SCENARIO_S33 = 6,
  ISM_SCENARIO_S34 = 7,
} IsmScenario;

typedef enum IsmStatus {
  ISM_STATUS_OK = 0,
  ISM_STATUS_NULL_POINTER = 1,
  ISM_STATUS_INVALID_UTF8 = 2,
  ISM_STATUS_IO = 3,
  ISM_STATUS_PARSE = 4,
  ISM_STATUS_INVALID_DATASET = 5,
  ISM_STATUS_INVALID_INPUT = 6,
  ISM_STATUS_INVALID_PARAMS = 7,
  ISM_STATUS_DIMENSION_MISMATCH = 8,
  ISM_STATUS_FEATURE_MISMATCH = 9,
  ISM_STATUS_SCENARIO_GUARD = 10,
  ISM_STATUS_PANIC = 11,
} IsmStatus;

// Opaque dataset handle.
typedef struct IsmDataset IsmDataset;

// Opaque trained-model handle.
typedef struct IsmModel IsmModel;

typedef struct IsmStats {
  uintptr_t row_count;
  uintptr_t feature_count;
  uintptr_t positive_count;
  uintptr_t negative_count;
  double positive_fraction;
} IsmStats;

typedef struct IsmMmd {
  double mmd2;
  double bandwidth;
  double p_value;
  double null_q95;
  // 1 when the observed value exceeds the permutation 95th percentile.
  int32_t differ;
} IsmMmd;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or "" when none.
// Valid until the next failing call on the same thread.
const char *ism_last_error(void);

// Library version as a static NUL-terminated string.
const char *ism_version(void);

// Reads a canonical dataset file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum IsmStatus ism_dataset_load(const char *path, struct IsmDataset **out);

// Builds a dataset from row-major `features` (`rows` x `cols`), 0/1
// `labels` and `cols` feature names.
//
// # Safety
// Pointers must reference arrays of the stated lengths; strings must be
// NUL-terminated; `out` must be writable.
enum IsmStatus ism_dataset_new(const char *name,
                               const char *smell,
                               const char *language,
                               const char *const *feature_names,
                               const double *features,
                               const uint8_t *labels,
                               uintptr_t rows,
                               uintptr_t cols,
                               struct IsmDataset **out);

// Writes `ds` in canonical form to `path`.
//
// # Safety
// `ds` must be a live handle; `path` NUL-terminated.
enum IsmStatus ism_dataset_save(const struct IsmDataset *ds, const char *path);

// # Safety
// `ds` must be null or a handle not yet freed.
void ism_dataset_free(struct IsmDataset *ds);

// # Safety
// `ds` must be a live handle; `out` writable.
enum IsmStatus ism_dataset_stats(const struct IsmDataset *ds, struct IsmStats *out);

// Sub-scenario of a (source, target) pair.
//
// # Safety
// Both handles must be live; `out` writable.
enum IsmStatus ism_classify(const struct IsmDataset *source,
                            const struct IsmDataset *target,
                            enum IsmScenario *out);

// Sub-scenario id such as "1.2"; a static string.
const char *ism_scenario_id(enum IsmScenario s);

// Short name such as "Inter SD_iD"; a static string.
const char *ism_scenario_abbreviation(enum IsmScenario s);

// Rank-based area under the ROC curve.
//
// # Safety
// `labels` and `scores` must hold `n` elements; `out` writable.
enum IsmStatus ism_auc(const uint8_t *labels, const double *scores, uintptr_t n, double *out);

// Permutation MMD test between two datasets with equal feature sets.
// `bandwidth <= 0` selects the median heuristic.
//
// # Safety
// Both handles must be live; `out` writable.
enum IsmStatus ism_mmd_test(const struct IsmDataset *a,
                            const struct IsmDataset *b,
                            double bandwidth,
                            uintptr_t permutations,
                            uint64_t seed,
                            struct IsmMmd *out);

// Trains a classifier. `params` is `name=value;name=value` or null for
// defaults.
//
// # Safety
// `x` must hold `rows * cols` values and `y` `rows` labels; `out` writable.
enum IsmStatus ism_model_fit(enum IsmLearner kind,
                             const char *params,
                             const double *x,
                             const uint8_t *y,
                             uintptr_t rows,
                             uintptr_t cols,
                             uint64_t seed,
                             struct IsmModel **out);

// Fits on a dataset handle.
//
// # Safety
// `ds` must be live; `out` writable.
enum IsmStatus ism_model_fit_dataset(enum IsmLearner kind,
                                     const char *params,
                                     const struct IsmDataset *ds,
                                     uint64_t seed,
                                     struct IsmModel **out);

// Positive-class scores for `rows` rows; `out` receives `rows` values.
//
// # Safety
// `model` must be live; `x` holds `rows * cols` values; `out` holds `rows`.
enum IsmStatus ism_model_predict_score(const struct IsmModel *model,
                                       const double *x,
                                       uintptr_t rows,
                                       uintptr_t cols,
                                       double *out);

// 0/1 labels for `rows` rows.
//
// # Safety
// As [`ism_model_predict_score`], with `out` holding `rows` bytes.
enum IsmStatus ism_model_predict_label(const struct IsmModel *model,
                                       const double *x,
                                       uintptr_t rows,
                                       uintptr_t cols,
                                       uint8_t *out);

// Decision threshold applied to scores by [`ism_model_predict_label`].
//
// # Safety
// `model` must be null or live. Returns NaN for null.
double ism_model_threshold(const struct IsmModel *model);

// # Safety
// `model` must be null or a handle not yet freed.
void ism_model_free(struct IsmModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTERSMELL_H */
