#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "kdr/pipeline.hpp"
#include "kdr/rng.hpp"
#include "kdr/synthdata.hpp"

using kdr::Dataset;
using kdr::Error;
using kdr::ErrorCode;
using kdr::ExperimentConfig;
using kdr::GridRow;
using kdr::GridSpec;
using kdr::Matrix;
using kdr::Method;

namespace {

// Two well-separated Gaussian blobs in 2-D.
Dataset blobs2(std::size_t per_class, std::uint64_t seed, double gap = 6.0) {
  kdr::CounterRng rng(seed);
  Dataset ds;
  ds.X = Matrix(2 * per_class, 2);
  ds.y.resize(2 * per_class);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int c = i < per_class ? 0 : 1;
    ds.X(i, 0) = rng.next_normal() + (c == 0 ? 0.0 : gap);
    ds.X(i, 1) = rng.next_normal();
    ds.y[i] = c;
  }
  return ds;
}

// Four blobs at the corners of a square.
Dataset blobs4(std::size_t per_class, std::uint64_t seed) {
  kdr::CounterRng rng(seed);
  Dataset ds;
  ds.X = Matrix(4 * per_class, 2);
  ds.y.resize(4 * per_class);
  const double cx[4] = {0.0, 8.0, 0.0, 8.0};
  const double cy[4] = {0.0, 0.0, 8.0, 8.0};
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      const std::size_t row = std::size_t(c) * per_class + i;
      ds.X(row, 0) = cx[c] + rng.next_normal();
      ds.X(row, 1) = cy[c] + rng.next_normal();
      ds.y[row] = c;
    }
  return ds;
}

// Multiset of (row values..., label) for order-independent comparisons.
std::multiset<std::vector<double>> row_multiset(const Dataset& ds) {
  std::multiset<std::vector<double>> out;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    std::vector<double> row(ds.X.row(i).begin(), ds.X.row(i).end());
    row.push_back(double(ds.y[i]));
    out.insert(std::move(row));
  }
  return out;
}

ExperimentConfig pca_cfg(std::size_t d = 2) {
  ExperimentConfig cfg;
  cfg.dr.method = Method::pca;
  cfg.dr.d = d;
  return cfg;
}

}  // namespace

TEST_CASE("subset keeps rows, labels and subjects aligned") {
  Dataset ds = blobs2(3, 1);
  ds.subject_ids = {"a", "b", "c", "d", "e", "f"};
  const std::vector<std::size_t> idx{4, 0, 2};
  const Dataset sub = kdr::subset(ds, idx);
  CHECK(sub.rows() == 3);
  CHECK(sub.y == std::vector<int>{1, 0, 0});
  CHECK(sub.subject_ids == std::vector<std::string>{"e", "a", "c"});
  for (std::size_t j = 0; j < ds.cols(); ++j) CHECK(sub.X(0, j) == ds.X(4, j));
  const std::vector<std::size_t> bad{99};
  CHECK_THROWS_AS(kdr::subset(ds, bad), Error);
}

TEST_CASE("stratified split halves each class and partitions the rows") {
  kdr::SynthSpec spec;
  spec.n_per_class = 40;
  spec.seed = 9;
  const Dataset ds = kdr::generate(spec);
  const auto [train, test] = kdr::stratified_split(ds, 0.5, 123);
  CHECK(train.rows() == 40);
  CHECK(test.rows() == 40);
  for (int c = 0; c < 2; ++c) {
    CHECK(std::count(train.y.begin(), train.y.end(), c) == 20);
    CHECK(std::count(test.y.begin(), test.y.end(), c) == 20);
  }
  auto all = row_multiset(train);
  auto test_rows = row_multiset(test);
  all.insert(test_rows.begin(), test_rows.end());
  CHECK(all == row_multiset(ds));

  const auto [train2, test2] = kdr::stratified_split(ds, 0.5, 123);
  CHECK(train2.X == train.X);
  CHECK(test2.y == test.y);
  const auto [train3, test3] = kdr::stratified_split(ds, 0.5, 124);
  CHECK_FALSE(train3.X == train.X);

  CHECK_THROWS_AS(kdr::stratified_split(ds, 0.0, 1), Error);
  CHECK_THROWS_AS(kdr::stratified_split(ds, 1.0, 1), Error);
}

TEST_CASE("run_single on separable blobs is perfect") {
  const Dataset ds = blobs2(30, 2);
  const kdr::RunResult r = kdr::run_single(ds, ds, pca_cfg());
  CHECK(r.accuracy == 1.0);
  REQUIRE(r.report.has_value());
  CHECK(r.report->accuracy == 1.0);
  REQUIRE(r.report->auc.has_value());
  CHECK(*r.report->auc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.models.size() == 1);
  CHECK(r.train_projections.rows() == ds.rows());
  CHECK(r.test_projections.rows() == ds.rows());
  CHECK(r.predictions.size() == ds.rows());
}

TEST_CASE("run_single trains one-vs-rest models for multiclass data") {
  const Dataset ds = blobs4(25, 3);
  const auto [train, test] = kdr::stratified_split(ds, 0.5, 7);
  const kdr::RunResult r = kdr::run_single(train, test, pca_cfg());
  CHECK(r.models.size() == 4);
  CHECK(r.class_order == std::vector<int>{0, 1, 2, 3});
  CHECK_FALSE(r.report.has_value());
  CHECK(r.accuracy >= 0.95);
  CHECK(r.predictions.size() == test.rows());
}

TEST_CASE("run_single validation") {
  Dataset ds = blobs2(5, 4);
  Dataset single = ds;
  std::fill(single.y.begin(), single.y.end(), 0);
  CHECK_THROWS_AS(kdr::run_single(single, ds, pca_cfg()), Error);
  Dataset narrow = ds;
  narrow.X = Matrix(ds.rows(), 1);
  CHECK_THROWS_AS(kdr::run_single(ds, narrow, pca_cfg()), Error);
}

TEST_CASE("klda unravels wine_chocolate where pca cannot") {
  kdr::SynthSpec spec;
  spec.n_per_class = 100;
  spec.seed = 11;
  const Dataset ds = kdr::generate(spec);
  const auto [train, test] = kdr::stratified_split(ds, 0.5, 42);

  ExperimentConfig klda;
  klda.dr.method = Method::klda;
  klda.dr.d = 2;
  klda.dr.delta = 0.5;
  const kdr::RunResult kr = kdr::run_single(train, test, klda);
  CHECK(kr.accuracy >= 0.99);

  const kdr::RunResult pr = kdr::run_single(train, test, pca_cfg());
  CHECK(pr.accuracy <= 0.85);
}

TEST_CASE("alternating protocol averages the two runs") {
  const Dataset ds = blobs4(20, 5);
  const auto [s1, s2] = kdr::stratified_split(ds, 0.5, 99);
  Dataset empty;
  const ExperimentConfig cfg = pca_cfg();

  const kdr::AlternatingResult sym = kdr::alternating_protocol(s1, s1, empty, cfg);
  CHECK(sym.mean_accuracy == sym.first.accuracy);
  CHECK(sym.mean_accuracy == sym.second.accuracy);

  const Dataset rest = blobs4(6, 55);
  const kdr::AlternatingResult alt = kdr::alternating_protocol(s1, s2, rest, cfg);
  CHECK(alt.mean_accuracy == 0.5 * (alt.first.accuracy + alt.second.accuracy));
  CHECK(alt.first.test_projections.rows() == s2.rows() + rest.rows());
  CHECK(alt.second.test_projections.rows() == s1.rows() + rest.rows());
}

TEST_CASE("alternating protocol averages binary metrics") {
  const Dataset ds = blobs2(24, 6, 3.0);
  const auto [s1, s2] = kdr::stratified_split(ds, 0.5, 1);
  Dataset empty;
  const kdr::AlternatingResult alt = kdr::alternating_protocol(s1, s2, empty, pca_cfg());
  REQUIRE(alt.first.report.has_value());
  REQUIRE(alt.second.report.has_value());
  REQUIRE(alt.mean_tpr.has_value());
  CHECK(*alt.mean_tpr == 0.5 * (*alt.first.report->tpr + *alt.second.report->tpr));
  REQUIRE(alt.mean_auc.has_value());
  CHECK(*alt.mean_auc == 0.5 * (*alt.first.report->auc + *alt.second.report->auc));
}

TEST_CASE("grid_search degenerate grid equals run_single") {
  const Dataset ds = blobs2(20, 7);
  const auto [train, test] = kdr::stratified_split(ds, 0.5, 2);
  const ExperimentConfig base = pca_cfg();
  const auto rows = kdr::grid_search(train, test, base, GridSpec{});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].failed);
  CHECK(rows[0].accuracy == kdr::run_single(train, test, base).accuracy);
}

TEST_CASE("grid_search ranks large cost first on separable data") {
  // evaluated on the training set itself, where the hard-margin SVM is
  // guaranteed perfect on separable data
  const Dataset ds = blobs2(20, 8);
  GridSpec grid;
  grid.costs = {1e-8, 1e8};
  const auto rows = kdr::grid_search(ds, ds, pca_cfg(), grid);
  REQUIRE(rows.size() == 2);
  // the large-cost row ranks first or ties the small-cost row
  CHECK(rows[0].accuracy >= rows[1].accuracy);
  if (rows[0].accuracy != rows[1].accuracy) CHECK(rows[0].cost == 1e8);
  const auto big = std::find_if(rows.begin(), rows.end(),
                                [](const GridRow& r) { return r.cost == 1e8; });
  REQUIRE(big != rows.end());
  CHECK(big->accuracy == 1.0);
}

TEST_CASE("grid_search rows match independent runs and sort deterministically") {
  kdr::SynthSpec spec;
  spec.dataset = kdr::SynthDataset::apple_tart;
  spec.n_per_class = 30;
  spec.seed = 13;
  const Dataset ds = kdr::generate(spec);
  const auto [train, test] = kdr::stratified_split(ds, 0.5, 4);

  ExperimentConfig base;
  base.dr.method = Method::kpca;
  base.dr.d = 2;
  GridSpec grid;
  grid.deltas = {0.5, 2.0};
  grid.dims = {2, 3};
  const auto rows = kdr::grid_search(train, test, base, grid);
  REQUIRE(rows.size() == 4);
  for (const GridRow& row : rows) {
    const kdr::RunResult r = kdr::run_single(train, test, kdr::apply_grid_row(base, row));
    CHECK(r.accuracy == row.accuracy);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const bool ordered =
        rows[i].accuracy > rows[i + 1].accuracy ||
        (rows[i].accuracy == rows[i + 1].accuracy &&
         std::tie(rows[i].delta, rows[i].eta, rows[i].cost, rows[i].d) <
             std::tie(rows[i + 1].delta, rows[i + 1].eta, rows[i + 1].cost, rows[i + 1].d));
    CHECK(ordered);
  }

  const auto parallel_rows = kdr::grid_search(train, test, base, grid, 4);
  REQUIRE(parallel_rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parallel_rows[i].accuracy == rows[i].accuracy);
    CHECK(parallel_rows[i].delta == rows[i].delta);
    CHECK(parallel_rows[i].d == rows[i].d);
  }
}

TEST_CASE("grid_search records failures as rows") {
  const Dataset ds = blobs2(10, 9);
  GridSpec grid;
  grid.costs = {-1.0, 1.0};  // negative cost is invalid
  const auto rows = kdr::grid_search(ds, ds, pca_cfg(), grid);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].failed);
  CHECK(rows[0].cost == 1.0);
  CHECK(rows[1].failed);
  CHECK(rows[1].error == "InvalidArgument");
}

TEST_CASE("lopo_cv builds one fold per subject and partitions the rows") {
  Dataset ds = blobs2(10, 10);
  ds.subject_ids.resize(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i)
    ds.subject_ids[i] = "s" + std::to_string(i % 5);
  const kdr::LopoResult r = kdr::lopo_cv(ds, pca_cfg());
  CHECK(r.subjects.size() == 5);
  CHECK(r.fold_accuracies.size() == 5);

  std::vector<bool> seen(ds.rows(), false);
  for (std::size_t f = 0; f < r.fold_test_rows.size(); ++f)
    for (std::size_t i : r.fold_test_rows[f]) {
      CHECK_FALSE(seen[i]);
      seen[i] = true;
      CHECK(ds.subject_ids[i] == r.subjects[f]);
    }
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));

  double mean = 0.0;
  for (double a : r.fold_accuracies) mean += a;
  CHECK(r.mean_accuracy == mean / 5.0);

  const kdr::LopoResult rp = kdr::lopo_cv(ds, pca_cfg(), 4);
  CHECK(rp.fold_accuracies == r.fold_accuracies);
}

TEST_CASE("lopo_cv with unique subjects is leave-one-out") {
  Dataset ds = blobs2(6, 11);
  ds.subject_ids.resize(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i)
    ds.subject_ids[i] = "p" + std::to_string(100 + i);
  const kdr::LopoResult r = kdr::lopo_cv(ds, pca_cfg());
  CHECK(r.subjects.size() == ds.rows());
  for (const auto& rows : r.fold_test_rows) CHECK(rows.size() == 1);
}

TEST_CASE("lopo_cv error cases") {
  Dataset ds = blobs2(4, 12);
  try {
    kdr::lopo_cv(ds, pca_cfg());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingSubjectIds);
  }

  // subject "a" holds every class-0 row plus one class-1 row; subject "b"
  // holds the rest of class 1. Testing "b" leaves a two-class training set,
  // but testing "a" leaves only class 1 -> SingleClassFold.
  Dataset skew = blobs2(3, 13);
  skew.subject_ids = {"a", "a", "a", "a", "b", "b"};
  try {
    kdr::lopo_cv(skew, pca_cfg());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingleClassFold);
  }
}

TEST_CASE("majority_vote rules") {
  const std::vector<std::vector<int>> votes{{0, 1, 2}, {1, 1, 0}, {1, 0, 2}};
  CHECK(kdr::majority_vote(votes) == std::vector<int>{1, 1, 2});
  // even split -> largest tied label (the positive class for binary labels)
  const std::vector<std::vector<int>> tie{{0, 1}, {1, 0}};
  CHECK(kdr::majority_vote(tie) == std::vector<int>{1, 1});
  const std::vector<std::vector<int>> ragged{{0}, {0, 1}};
  CHECK_THROWS_AS(kdr::majority_vote(ragged), Error);
}

TEST_CASE("singleton ensemble equals run_single on its bootstrap sample") {
  const Dataset ds = blobs2(200, 14, 4.0);
  const auto [m1, m2] = kdr::stratified_split(ds, 0.5, 5);
  const std::uint64_t base_seed = 900;
  const kdr::EnsembleResult e =
      kdr::bootstrap_ensemble(m1, m2, pca_cfg(), 1, 50, base_seed);

  // independent reconstruction of worker 1's sample
  kdr::CounterRng rng(base_seed + 1);
  std::vector<std::size_t> rows(50);
  for (auto& v : rows) v = rng.next_below(m1.rows());
  const kdr::RunResult direct = kdr::run_single(kdr::subset(m1, rows), m2, pca_cfg());
  CHECK(e.worker_predictions.size() == 1);
  CHECK(e.worker_predictions[0] == direct.predictions);
  CHECK(e.merged_predictions == direct.predictions);
  CHECK(e.merged_accuracy == direct.accuracy);
  REQUIRE(e.merged_report.has_value());
}

TEST_CASE("ensemble merge is worker-order invariant and deterministic") {
  const Dataset ds = blobs2(300, 15, 3.0);
  const auto [m1, m2] = kdr::stratified_split(ds, 0.5, 6);
  const kdr::EnsembleResult seq =
      kdr::bootstrap_ensemble(m1, m2, pca_cfg(), 5, 80, 777, 1);
  const kdr::EnsembleResult par =
      kdr::bootstrap_ensemble(m1, m2, pca_cfg(), 5, 80, 777, 4);
  CHECK(seq.merged_predictions == par.merged_predictions);
  CHECK(seq.worker_accuracies == par.worker_accuracies);

  auto shuffled = seq.worker_predictions;
  std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
  CHECK(kdr::majority_vote(shuffled) == seq.merged_predictions);
}

TEST_CASE("ensemble accuracy tracks full training") {
  const Dataset ds = blobs2(1000, 16, 2.5);
  const auto [m1, m2] = kdr::stratified_split(ds, 0.5, 7);
  const double full = kdr::run_single(m1, m2, pca_cfg()).accuracy;
  const kdr::EnsembleResult e =
      kdr::bootstrap_ensemble(m1, m2, pca_cfg(), 5, 300, 4242, 4);
  CHECK(std::fabs(e.merged_accuracy - full) <= 0.03);
}

TEST_CASE("ensemble argument validation") {
  const Dataset ds = blobs2(10, 17);
  CHECK_THROWS_AS(kdr::bootstrap_ensemble(ds, ds, pca_cfg(), 0, 5, 1), Error);
  CHECK_THROWS_AS(kdr::bootstrap_ensemble(ds, ds, pca_cfg(), 1, 0, 1), Error);
}
