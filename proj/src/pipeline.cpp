#include "kdr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "kdr/errors.hpp"
#include "kdr/rng.hpp"

namespace kdr {

namespace {

// Runs fn(0..count-1) across a pool; exceptions are captured per item and the
// lowest-index one is rethrown after the pool drains, matching the order a
// sequential execution would fail in.
template <typename Fn>
void parallel_indexed(std::size_t count, std::size_t workers, Fn&& fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(workers, count);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

FitResult fit_from_config(const Dataset& train, const MethodConfig& mc) {
  const KernelSpec kern{mc.family, mc.delta};
  switch (mc.method) {
    case Method::pca:
      return fit_pca(train.X, mc.d);
    case Method::lda:
      return fit_lda(train.X, train.y, mc.d);
    case Method::kpca:
      return fit_kpca(train.X, kern, mc.d, mc.center);
    case Method::skpca: {
      LinkSpec link;
      link.kind = mc.link;
      link.eta = mc.eta;
      link.delta = mc.delta;
      return fit_skpca(train.X, train.y, kern, link, mc.d);
    }
    case Method::klda:
      return fit_klda(train.X, train.y, kern, mc.d);
  }
  raise(ErrorCode::InvalidArgument, "unknown method enum value");
}

namespace {

SvmOptions svm_options(const SvmConfig& sc) {
  return SvmOptions{sc.tol, sc.max_updates, sc.seed};
}

// The SVM is trained on standardized projections so its cost parameter keeps
// the same meaning whatever scale the reduction method emits (kernel methods
// can produce projections orders of magnitude smaller than the raw features).
// Folding mu/sigma into (w, b) afterwards makes the returned model act on raw
// projections directly: w'_j = w_j/sigma_j, b' = b - sum_j w_j mu_j/sigma_j.
LinearSvmModel fold_standardizer(LinearSvmModel model, const Standardizer& s) {
  double shift = 0.0;
  for (std::size_t j = 0; j < model.w.size(); ++j) {
    shift += model.w[j] * s.means[j] / s.stds[j];
    model.w[j] /= s.stds[j];
  }
  model.b -= shift;
  return model;
}

LinearSvmModel train_svm(const Matrix& proj_std, const Standardizer& stdzr,
                         const std::vector<int>& y, const SvmConfig& sc) {
  LinearSvmModel model = svm_fit(proj_std, y, sc.cost, svm_options(sc));
  if (sc.platt) model = platt_fit(model, proj_std, y);
  return fold_standardizer(std::move(model), stdzr);
}

}  // namespace

LinearSvmModel fit_svm_standardized(const Matrix& x, const std::vector<int>& y,
                                    const SvmConfig& cfg) {
  const auto [stdzr, xs] = standardize_fit(x);
  return train_svm(xs, stdzr, y, cfg);
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  out.X = take_rows(ds.X, idx);
  out.y.reserve(idx.size());
  for (std::size_t i : idx) {
    if (i >= ds.rows())
      raise(ErrorCode::InvalidArgument, "subset index out of range");
    out.y.push_back(ds.y[i]);
  }
  if (!ds.subject_ids.empty()) {
    out.subject_ids.reserve(idx.size());
    for (std::size_t i : idx) out.subject_ids.push_back(ds.subject_ids[i]);
  }
  out.feature_names = ds.feature_names;
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    raise(ErrorCode::InvalidArgument, "train_fraction must lie strictly in (0,1)");
  validate_dataset(ds);
  const std::vector<int> labels = distinct_labels(ds.y);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t li = 0; li < labels.size(); ++li) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.rows(); ++i)
      if (ds.y[i] == labels[li]) rows.push_back(i);
    CounterRng rng(seed, li);
    for (std::size_t i = rows.size(); i > 1; --i)
      std::swap(rows[i - 1], rows[rng.next_below(i)]);
    const std::size_t k =
        std::size_t(std::lround(train_fraction * double(rows.size())));
    for (std::size_t i = 0; i < rows.size(); ++i)
      (i < k ? train_idx : test_idx).push_back(rows[i]);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {subset(ds, train_idx), subset(ds, test_idx)};
}

RunResult run_single(const Dataset& train, const Dataset& test,
                     const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_dataset(train);
  validate_dataset(test);
  if (train.cols() != test.cols())
    raise(ErrorCode::DimensionMismatch, "train has " + std::to_string(train.cols()) +
                                            " features, test has " +
                                            std::to_string(test.cols()));
  const std::vector<int> labels = distinct_labels(train.y);
  if (labels.size() < 2)
    raise(ErrorCode::TooFewClasses, "training set needs at least two classes");

  RunResult out;
  FitResult fit = fit_from_config(train, cfg.dr);
  out.projector = std::move(fit.projector);
  out.train_projections = std::move(fit.info.train_projections);
  out.warnings = fit.info.warnings;
  out.ridge_used = fit.info.ridge_used;
  out.test_projections = transform(out.projector, test.X);
  out.class_order = labels;

  const auto [proj_stdzr, train_proj_std] = standardize_fit(out.train_projections);

  if (labels.size() == 2) {
    LinearSvmModel model = train_svm(train_proj_std, proj_stdzr, train.y, cfg.svm);
    const std::vector<double> scores = svm_decision(model, out.test_projections);
    out.predictions = svm_predict(model, out.test_projections);
    out.report = evaluate(test.y, out.predictions, &scores);
    out.accuracy = out.report->accuracy;
    out.models.push_back(std::move(model));
  } else {
    // one-vs-rest: binary problem "label c (positive, mapped to 1) vs rest"
    const std::size_t n_test = test.rows();
    Matrix decisions(labels.size(), n_test);
    for (std::size_t li = 0; li < labels.size(); ++li) {
      std::vector<int> ybin(train.rows());
      for (std::size_t i = 0; i < train.rows(); ++i)
        ybin[i] = train.y[i] == labels[li] ? 1 : 0;
      LinearSvmModel model = train_svm(train_proj_std, proj_stdzr, ybin, cfg.svm);
      const std::vector<double> f = svm_decision(model, out.test_projections);
      for (std::size_t j = 0; j < n_test; ++j) decisions(li, j) = f[j];
      out.models.push_back(std::move(model));
    }
    out.predictions.resize(n_test);
    std::size_t hits = 0;
    for (std::size_t j = 0; j < n_test; ++j) {
      std::size_t best = 0;
      for (std::size_t li = 1; li < labels.size(); ++li)
        if (decisions(li, j) >= decisions(best, j)) best = li;  // ties -> larger label
      out.predictions[j] = labels[best];
      if (out.predictions[j] == test.y[j]) ++hits;
    }
    out.accuracy = n_test == 0 ? 0.0 : double(hits) / double(n_test);
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

AlternatingResult alternating_protocol(const Dataset& s1, const Dataset& s2,
                                       const Dataset& r, const ExperimentConfig& cfg) {
  auto concat = [](const Dataset& a, const Dataset& b) {
    if (b.rows() == 0) return a;
    if (a.rows() == 0) return b;
    if (a.cols() != b.cols())
      raise(ErrorCode::DimensionMismatch, "cannot concatenate datasets of different widths");
    Dataset out;
    out.X = Matrix(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      std::copy(a.X.row(i).begin(), a.X.row(i).end(), out.X.row(i).begin());
    for (std::size_t i = 0; i < b.rows(); ++i)
      std::copy(b.X.row(i).begin(), b.X.row(i).end(), out.X.row(a.rows() + i).begin());
    out.y = a.y;
    out.y.insert(out.y.end(), b.y.begin(), b.y.end());
    const bool subjects = !a.subject_ids.empty() && !b.subject_ids.empty();
    if (subjects) {
      out.subject_ids = a.subject_ids;
      out.subject_ids.insert(out.subject_ids.end(), b.subject_ids.begin(),
                             b.subject_ids.end());
    }
    out.feature_names = a.feature_names;
    return out;
  };

  AlternatingResult out;
  out.first = run_single(s1, concat(s2, r), cfg);
  out.second = run_single(s2, concat(s1, r), cfg);
  out.mean_accuracy = 0.5 * (out.first.accuracy + out.second.accuracy);
  auto mean_opt = [](const std::optional<double>& a, const std::optional<double>& b)
      -> std::optional<double> {
    if (a && b) return 0.5 * (*a + *b);
    return std::nullopt;
  };
  const auto& ra = out.first.report;
  const auto& rb = out.second.report;
  if (ra && rb) {
    out.mean_tpr = mean_opt(ra->tpr, rb->tpr);
    out.mean_tnr = mean_opt(ra->tnr, rb->tnr);
    out.mean_auc = mean_opt(ra->auc, rb->auc);
  }
  return out;
}

ExperimentConfig apply_grid_row(const ExperimentConfig& base, const GridRow& row) {
  ExperimentConfig cfg = base;
  cfg.dr.delta = row.delta;
  cfg.dr.eta = row.eta;
  cfg.dr.d = row.d;
  cfg.svm.cost = row.cost;
  return cfg;
}

std::vector<GridRow> grid_search(const Dataset& train, const Dataset& test,
                                 const ExperimentConfig& base, const GridSpec& grid,
                                 std::size_t workers) {
  const std::vector<double> deltas =
      grid.deltas.empty() ? std::vector<double>{base.dr.delta} : grid.deltas;
  const std::vector<double> etas =
      grid.etas.empty() ? std::vector<double>{base.dr.eta} : grid.etas;
  const std::vector<double> costs =
      grid.costs.empty() ? std::vector<double>{base.svm.cost} : grid.costs;
  const std::vector<std::size_t> dims =
      grid.dims.empty() ? std::vector<std::size_t>{base.dr.d} : grid.dims;

  std::vector<GridRow> rows;
  for (double delta : deltas)
    for (double eta : etas)
      for (double cost : costs)
        for (std::size_t d : dims) {
          GridRow row;
          row.delta = delta;
          row.eta = eta;
          row.cost = cost;
          row.d = d;
          rows.push_back(row);
        }

  parallel_indexed(rows.size(), workers, [&](std::size_t i) {
    try {
      rows[i].accuracy = run_single(train, test, apply_grid_row(base, rows[i])).accuracy;
    } catch (const Error& e) {
      rows[i].failed = true;
      rows[i].error = error_name(e.code());
      rows[i].accuracy = 0.0;
    }
  });

  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) {
    if (a.failed != b.failed) return !a.failed;  // failures last
    if (!a.failed && a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return std::tie(a.delta, a.eta, a.cost, a.d) < std::tie(b.delta, b.eta, b.cost, b.d);
  });
  return rows;
}

LopoResult lopo_cv(const Dataset& ds, const ExperimentConfig& cfg, std::size_t workers) {
  validate_dataset(ds);
  if (ds.subject_ids.empty())
    raise(ErrorCode::MissingSubjectIds, "leave-one-person-out requires subject ids");
  std::vector<std::string> subjects(ds.subject_ids);
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  if (subjects.size() < 2)
    raise(ErrorCode::MissingSubjectIds, "need at least two distinct subjects");

  LopoResult out;
  out.subjects = subjects;
  out.fold_test_rows.resize(subjects.size());
  out.fold_accuracies.assign(subjects.size(), 0.0);

  parallel_indexed(subjects.size(), workers, [&](std::size_t f) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < ds.rows(); ++i)
      (ds.subject_ids[i] == subjects[f] ? test_rows : train_rows).push_back(i);
    const Dataset train = subset(ds, train_rows);
    if (distinct_labels(train.y).size() < 2)
      raise(ErrorCode::SingleClassFold,
            "training fold for subject '" + subjects[f] + "' has a single class");
    const Dataset test = subset(ds, test_rows);
    out.fold_accuracies[f] = run_single(train, test, cfg).accuracy;
    out.fold_test_rows[f] = std::move(test_rows);
  });

  double sum = 0.0;
  for (double a : out.fold_accuracies) sum += a;
  out.mean_accuracy = sum / double(out.fold_accuracies.size());
  return out;
}

std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes) {
  if (votes.empty()) raise(ErrorCode::InvalidArgument, "majority_vote needs votes");
  const std::size_t n = votes[0].size();
  for (const auto& v : votes)
    if (v.size() != n)
      raise(ErrorCode::LengthMismatch, "vote vectors have differing lengths");
  std::vector<int> merged(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::map<int, std::size_t> counts;
    for (const auto& v : votes) ++counts[v[j]];
    std::size_t best_count = 0;
    int best_label = 0;
    for (const auto& [label, count] : counts)
      if (count > best_count || (count == best_count && label > best_label)) {
        best_count = count;
        best_label = label;  // ties -> largest tied label
      }
    merged[j] = best_label;
  }
  return merged;
}

EnsembleResult bootstrap_ensemble(const Dataset& m1, const Dataset& m2,
                                  const ExperimentConfig& cfg, std::size_t n_samples,
                                  std::size_t sample_size, std::uint64_t base_seed,
                                  std::size_t workers) {
  validate_dataset(m1);
  validate_dataset(m2);
  if (n_samples == 0) raise(ErrorCode::InvalidArgument, "n_samples must be positive");
  if (sample_size == 0) raise(ErrorCode::InvalidArgument, "sample_size must be positive");
  if (m1.rows() == 0) raise(ErrorCode::InvalidArgument, "m1 is empty");

  EnsembleResult out;
  out.worker_accuracies.assign(n_samples, 0.0);
  out.worker_predictions.assign(n_samples, {});

  parallel_indexed(n_samples, workers, [&](std::size_t i) {
    CounterRng rng(base_seed + i + 1);  // sample i is 1-based in the seed
    std::vector<std::size_t> rows(sample_size);
    for (std::size_t k = 0; k < sample_size; ++k) rows[k] = rng.next_below(m1.rows());
    const Dataset sample = subset(m1, rows);
    RunResult r = run_single(sample, m2, cfg);
    out.worker_accuracies[i] = r.accuracy;
    out.worker_predictions[i] = std::move(r.predictions);
  });

  out.merged_predictions = majority_vote(out.worker_predictions);
  std::size_t hits = 0;
  for (std::size_t j = 0; j < m2.rows(); ++j)
    if (out.merged_predictions[j] == m2.y[j]) ++hits;
  out.merged_accuracy = m2.rows() == 0 ? 0.0 : double(hits) / double(m2.rows());
  if (distinct_labels(m2.y).size() <= 2) {
    try {
      out.merged_report = evaluate(m2.y, out.merged_predictions);
    } catch (const Error&) {
      // e.g. merged predictions introduce a third label; accuracy still stands
    }
  }
  return out;
}

}  // namespace kdr
