/* C interface to the dimension-reduction and classification toolkit.
 *
 * Conventions:
 *   - Every fallible function returns kdr_status: KDR_OK (0) on success, a
 *     positive error code otherwise. kdr_status_name() yields the stable code
 *     name; kdr_last_error() the thread-local message of the last failure.
 *   - Out-parameters are written only on success.
 *   - Objects returned through handle out-parameters must be released with
 *     the matching *_free function; strings returned through char** with
 *     kdr_string_free. All *_free functions accept NULL.
 *   - JSON configuration fragments use the same schemas as run documents:
 *     method config {"method","d","family","delta","link","eta","center"},
 *     SVM config {"cost","tol","max_updates","seed","platt"}. All keys are
 *     optional; defaults apply.
 */
#ifndef KDR_H
#define KDR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t kdr_status;

#define KDR_OK 0
#define KDR_ERR_NON_SYMMETRIC 1
#define KDR_ERR_CONVERGENCE_FAILURE 2
#define KDR_ERR_NOT_POSITIVE_DEFINITE 3
#define KDR_ERR_DIMENSION_MISMATCH 4
#define KDR_ERR_ALREADY_CENTERED 5
#define KDR_ERR_MISSING_FEATURES 6
#define KDR_ERR_SIZE_MISMATCH 7
#define KDR_ERR_DEGENERATE_SAMPLE 8
#define KDR_ERR_TOO_FEW_CLASSES 9
#define KDR_ERR_SINGULAR_WITHIN 10
#define KDR_ERR_SINGLE_CLASS 11
#define KDR_ERR_NON_CONVERGENCE 12
#define KDR_ERR_LENGTH_MISMATCH 13
#define KDR_ERR_MISSING_SUBJECT_IDS 14
#define KDR_ERR_SINGLE_CLASS_FOLD 15
#define KDR_ERR_INVALID_ARGUMENT 16
#define KDR_ERR_IO 17
#define KDR_ERR_PARSE 18
#define KDR_ERR_INTERNAL 100

const char* kdr_version(void);
const char* kdr_status_name(kdr_status status);
const char* kdr_last_error(void);
void kdr_string_free(char* s);

typedef struct kdr_dataset kdr_dataset;
typedef struct kdr_projector kdr_projector;
typedef struct kdr_svm kdr_svm;

/* ---- datasets ---------------------------------------------------------- */

/* name: "wine_chocolate" | "apple_tart" | "swiss_roll" */
kdr_status kdr_dataset_generate(const char* name, size_t n_per_class,
                                double noise_sd, uint64_t seed,
                                kdr_dataset** out);
kdr_status kdr_dataset_read_csv(const char* path, kdr_dataset** out);
kdr_status kdr_dataset_write_csv(const kdr_dataset* ds, const char* path);
kdr_status kdr_dataset_from_csv_text(const char* text, kdr_dataset** out);
kdr_status kdr_dataset_to_csv_text(const kdr_dataset* ds, char** out_text);

size_t kdr_dataset_rows(const kdr_dataset* ds);
size_t kdr_dataset_cols(const kdr_dataset* ds);
size_t kdr_dataset_num_classes(const kdr_dataset* ds);
/* out_labels must hold kdr_dataset_rows(ds) entries */
kdr_status kdr_dataset_labels(const kdr_dataset* ds, int32_t* out_labels);

/* Deterministic stratified split (per-label shuffles seeded by `seed`). */
kdr_status kdr_dataset_split(const kdr_dataset* ds, double train_fraction,
                             uint64_t seed, kdr_dataset** out_train,
                             kdr_dataset** out_test);
void kdr_dataset_free(kdr_dataset* ds);

/* ---- dimension reduction ---------------------------------------------- */

kdr_status kdr_fit(const kdr_dataset* train, const char* method_config_json,
                   kdr_projector** out);
kdr_status kdr_projector_save(const kdr_projector* p, const char* path);
kdr_status kdr_projector_load(const char* path, kdr_projector** out);
/* JSON: {"method","d","requested_d","eigenvalues","ridge_used","warnings"}
 * (fit details are present only on handles produced by kdr_fit) */
kdr_status kdr_projector_info(const kdr_projector* p, char** out_json);
/* Projected dataset: features f0..f{d-1}, labels and subject ids carried over. */
kdr_status kdr_transform(const kdr_projector* p, const kdr_dataset* in,
                         kdr_dataset** out);
void kdr_projector_free(kdr_projector* p);

/* ---- classification ---------------------------------------------------- */

/* Binary labels only. Features are standardized internally and the scaling is
 * folded back into (w, b), so the model applies to raw features. */
kdr_status kdr_svm_fit(const kdr_dataset* train, const char* svm_config_json,
                       kdr_svm** out);
kdr_status kdr_svm_save(const kdr_svm* m, const char* path);
kdr_status kdr_svm_load(const char* path, kdr_svm** out);
/* out buffers must hold kdr_dataset_rows(data) entries */
kdr_status kdr_svm_predict(const kdr_svm* m, const kdr_dataset* data,
                           int32_t* out_labels);
kdr_status kdr_svm_decision(const kdr_svm* m, const kdr_dataset* data,
                            double* out_scores);
/* Requires a model fitted with "platt": true. */
kdr_status kdr_svm_probability(const kdr_svm* m, const kdr_dataset* data,
                               double* out_probabilities);
void kdr_svm_free(kdr_svm* m);

/* ---- evaluation -------------------------------------------------------- */

/* Compares predictions (and optional scores) against truth's labels.
 * JSON: {"accuracy","confusion","positive_label", "tpr"?,"tnr"?,"auc"?,
 *        "roc_points"? } — optional fields appear when defined. */
kdr_status kdr_evaluate(const kdr_dataset* truth, const int32_t* y_pred,
                        const double* scores_or_null, char** out_json);

/* ---- run documents ----------------------------------------------------- */

/* Executes a kdr-run document (commands: eval, tune, lopo, ensemble, simsep)
 * and returns the completed document text. workers sizes the thread pool and
 * never changes metrics. */
kdr_status kdr_run_execute(const char* rundoc_json, size_t workers,
                           char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KDR_H */
