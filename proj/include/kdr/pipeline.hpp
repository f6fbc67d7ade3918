#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kdr/classify.hpp"
#include "kdr/dataset.hpp"
#include "kdr/dimred.hpp"

namespace kdr {

inline constexpr const char* kToolVersion = "0.1.0";

// Dimension-reduction step configuration. Only the fields relevant to the
// chosen method are consulted (delta for kernel methods, eta/link for skpca,
// center for kpca).
struct MethodConfig {
  Method method = Method::pca;
  std::size_t d = 2;
  KernelFamily family = KernelFamily::rbf;
  double delta = 1.0;
  LinkKind link = LinkKind::indicator;
  double eta = 0.0;
  bool center = true;
};

struct SvmConfig {
  double cost = 1.0;
  // Looser than the solver's 1e-6 default: experiment-sized duals are heavily
  // rank-deficient after 2-D projections and the tail iterations do not move
  // accuracies.
  double tol = 1e-3;
  std::size_t max_updates = 10'000'000;
  std::uint64_t seed = 0x73766d2d6b6472ull;
  bool platt = false;  // fit sigmoid on the training set after the SVM
};

struct ExperimentConfig {
  MethodConfig dr;
  SvmConfig svm;
};

// Row selection; keeps labels, subject ids and feature names aligned.
Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

// Deterministic stratified split: per label (ascending), indices are shuffled
// by CounterRng(seed, label_position) and the first round(fraction*count) go
// to the first half. Both halves preserve the original row order.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed);

// One standardize -> fit DR -> transform -> SVM -> evaluate pass.
// Binary problems train one SVM and fill `report` (scores = decision values,
// so the report carries ROC/AUC). Problems with C > 2 classes train C
// one-vs-rest SVMs (class c against the rest); the predicted label is the
// argmax decision, ties resolving to the largest label; `report` is absent
// and only accuracy is populated.
struct RunResult {
  double accuracy = 0.0;
  std::optional<EvalReport> report;
  Projector projector;
  std::vector<LinearSvmModel> models;  // size 1, or one per class for OvR
  std::vector<int> class_order;        // labels aligned with models
  Matrix train_projections{0, 0};
  Matrix test_projections{0, 0};
  std::vector<int> predictions;
  std::vector<std::string> warnings;
  double ridge_used = 0.0;
  double wall_seconds = 0.0;
};

RunResult run_single(const Dataset& train, const Dataset& test,
                     const ExperimentConfig& cfg);

// Train on s1, test on s2 ∪ r; then train on s2, test on s1 ∪ r; report the
// arithmetic means. Optional metric means are present only when both runs
// produced the metric.
struct AlternatingResult {
  RunResult first;
  RunResult second;
  double mean_accuracy = 0.0;
  std::optional<double> mean_tpr;
  std::optional<double> mean_tnr;
  std::optional<double> mean_auc;
};

AlternatingResult alternating_protocol(const Dataset& s1, const Dataset& s2,
                                       const Dataset& r, const ExperimentConfig& cfg);

// Candidate values per tunable parameter; empty vectors mean "use the base
// config's value". The search space is the cross product.
struct GridSpec {
  std::vector<double> deltas;
  std::vector<double> etas;
  std::vector<double> costs;
  std::vector<std::size_t> dims;
};

struct GridRow {
  double delta = 0.0;
  double eta = 0.0;
  double cost = 0.0;
  std::size_t d = 0;
  bool failed = false;
  std::string error;  // error name when failed
  double accuracy = 0.0;
};

// Evaluates run_single for every combination (parallel across combinations)
// and returns rows sorted by accuracy descending; ties and failed rows order
// lexicographically by (delta, eta, cost, d). A failing combination becomes a
// failed row, never a thrown error; failed rows sort after all successes.
std::vector<GridRow> grid_search(const Dataset& train, const Dataset& test,
                                 const ExperimentConfig& base, const GridSpec& grid,
                                 std::size_t workers = 1);

ExperimentConfig apply_grid_row(const ExperimentConfig& base, const GridRow& row);

// Leave-one-person-out cross-validation: one fold per distinct subject id
// (ascending order); fold i tests exactly subject i's rows. A fold whose
// training half has fewer than two classes raises SingleClassFold.
struct LopoResult {
  std::vector<std::string> subjects;
  std::vector<std::vector<std::size_t>> fold_test_rows;  // aligned with subjects
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
};

LopoResult lopo_cv(const Dataset& ds, const ExperimentConfig& cfg,
                   std::size_t workers = 1);

// Bootstrap majority-vote ensemble: sample i (1-based) draws `sample_size`
// rows from m1 with replacement using CounterRng(base_seed + i), trains the
// configured model, and predicts all of m2. The merged prediction per test
// row is the majority vote, ties resolving to the largest tied label; merging
// is by sample index, so worker scheduling cannot change the result.
struct EnsembleResult {
  std::vector<double> worker_accuracies;
  std::vector<std::vector<int>> worker_predictions;
  std::vector<int> merged_predictions;
  double merged_accuracy = 0.0;
  std::optional<EvalReport> merged_report;  // binary problems only
};

EnsembleResult bootstrap_ensemble(const Dataset& m1, const Dataset& m2,
                                  const ExperimentConfig& cfg, std::size_t n_samples,
                                  std::size_t sample_size, std::uint64_t base_seed,
                                  std::size_t workers = 1);

// Majority vote across aligned prediction vectors (ties -> largest label).
std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes);

/// Runs the fit_* function selected by the config against the dataset.
FitResult fit_from_config(const Dataset& train, const MethodConfig& mc);

// The SVM training step run_single uses: fit on standardized features, then
// fold mean/std into (w, b) so the returned model acts on the raw features.
// Keeps the cost parameter's meaning independent of feature scale.
LinearSvmModel fit_svm_standardized(const Matrix& x, const std::vector<int>& y,
                                    const SvmConfig& cfg);

}  // namespace kdr
