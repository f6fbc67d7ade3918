#ifndef KDR_CLASSIFY_HPP
#define KDR_CLASSIFY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kdr/matrix.hpp"

namespace kdr {

struct SvmOptions {
  double tol = 1e-6;
  std::size_t max_updates = 10'000'000;
  std::uint64_t seed = 0x73766d2d6b6472ull;  // fixed default keeps fits deterministic
};

// Linear soft-margin SVM. label_map: label_neg <-> -1, label_pos <-> +1 with
// label_neg < label_pos (ascending order of the two distinct labels).
// Tie rule: sign(0) resolves to +1, so f(x)=0 predicts label_pos.
struct LinearSvmModel {
  std::vector<double> w;
  double b = 0.0;
  double cost = 1.0;
  int label_neg = 0;
  int label_pos = 1;
  std::optional<double> platt_a;
  std::optional<double> platt_b;
  std::vector<double> alphas;  // dual certificate, kept in memory, not serialized
};

LinearSvmModel svm_fit(const Matrix& x, std::span<const int> y, double cost,
                       const SvmOptions& opts = {});

std::vector<double> svm_decision(const LinearSvmModel& m, const Matrix& x);
std::vector<int> svm_predict(const LinearSvmModel& m, const Matrix& x);

// Fits (platt_a, platt_b) on decision values of x against y; returns a copy of
// the model with the sigmoid attached. Default usage calibrates on the
// training set itself; pass a holdout to calibrate out of sample.
LinearSvmModel platt_fit(const LinearSvmModel& m, const Matrix& x, std::span<const int> y);

// P(label_pos | x) = 1 / (1 + exp(platt_a * f(x) + platt_b)).
std::vector<double> svm_probability(const LinearSvmModel& m, const Matrix& x);

// confusion is [[TP, FN], [FP, TN]]. tpr/tnr are absent on 0/0. roc/auc are
// present only when scores were supplied and both classes occur.
struct EvalReport {
  std::array<std::array<std::int64_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
  double accuracy = 0.0;
  std::optional<double> tpr;
  std::optional<double> tnr;
  std::vector<std::pair<double, double>> roc_points;
  std::optional<double> auc;
  int positive_label = 0;
};

// Positive class is the larger of the (at most two) distinct labels seen.
// Scores follow the higher-means-more-positive convention.
EvalReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    const std::vector<double>* scores = nullptr);

}  // namespace kdr

#endif
