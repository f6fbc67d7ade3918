#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "kdr/dimred.hpp"
#include "kdr/rng.hpp"
#include "oracles.hpp"

using kdr::Error;
using kdr::ErrorCode;
using kdr::FitResult;
using kdr::KernelFamily;
using kdr::KernelSpec;
using kdr::LinkKind;
using kdr::LinkSpec;
using kdr::Matrix;
using kdr::Method;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  kdr::CounterRng rng(seed);
  Matrix m(r, c);
  for (auto& x : m.flat()) x = rng.next_normal();
  return m;
}

// Two or three Gaussian blobs in 2-D with per-class centers.
Matrix blobs(const std::vector<std::pair<double, double>>& centers, std::size_t per_class,
             double spread, std::uint64_t seed, std::vector<int>& y) {
  kdr::CounterRng rng(seed);
  Matrix x(centers.size() * per_class, 2);
  y.clear();
  std::size_t row = 0;
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      x(row, 0) = centers[c].first + spread * rng.next_normal();
      x(row, 1) = centers[c].second + spread * rng.next_normal();
      y.push_back(int(c));
    }
  return x;
}

bool has_warning(const FitResult& r, const std::string& prefix) {
  for (const auto& w : r.info.warnings)
    if (w.rfind(prefix, 0) == 0) return true;
  return false;
}

double column_sign_diff(const Matrix& a, std::size_t ca, const Matrix& b, std::size_t cb) {
  double dplus = 0.0, dminus = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    dplus += (a(i, ca) - b(i, cb)) * (a(i, ca) - b(i, cb));
    dminus += (a(i, ca) + b(i, cb)) * (a(i, ca) + b(i, cb));
  }
  return std::sqrt(std::min(dplus, dminus));
}

// Sample-standardized copy of one projection column, for scale-free HSIC use.
std::vector<double> standardized_column(const Matrix& m, std::size_t col) {
  const std::size_t n = m.rows();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += m(i, col) / double(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (m(i, col) - mean) * (m(i, col) - mean);
  var /= double(n - 1);
  const double s = std::sqrt(var);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (m(i, col) - mean) / s;
  return out;
}

double label_dependence(const std::vector<double>& z, const std::vector<int>& y) {
  const std::size_t n = z.size();
  Matrix zm(n, 1);
  for (std::size_t i = 0; i < n; ++i) zm(i, 0) = z[i];
  const kdr::GramMatrix k = kdr::gram(KernelSpec{KernelFamily::linear, 0.0}, zm);
  const kdr::LinkMatrix l = kdr::link_matrix(LinkSpec{}, y, nullptr);
  return kdr::hsic_empirical(k, l);
}

std::vector<std::size_t> ranks_of(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<std::size_t> rank(v.size());
  for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
  return rank;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::pca, Method::lda, Method::kpca, Method::skpca, Method::klda})
    CHECK(kdr::method_from_name(kdr::method_name(m)) == m);
  CHECK_THROWS_AS(kdr::method_from_name("pls"), Error);
}

TEST_CASE("standardize two-point column") {
  Matrix x(2, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 3.0;
  auto [s, xs] = kdr::standardize_fit(x);
  CHECK(s.means[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.stds[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(xs(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(xs(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("standardize flags constant columns as zeros") {
  Matrix x(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = 7.5;
    x(i, 1) = double(i);
  }
  auto [s, xs] = kdr::standardize_fit(x);
  CHECK(s.constant[0] == 1);
  CHECK(s.constant[1] == 0);
  CHECK(s.stds[0] == 1.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(xs(i, 0) == 0.0);
}

TEST_CASE("standardize statistics verified directly") {
  const Matrix x = random_matrix(6, 3, 1001);
  auto [s, xs] = kdr::standardize_fit(x);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 6; ++i) mean += xs(i, j) / 6.0;
    double var = 0.0;
    for (std::size_t i = 0; i < 6; ++i) var += (xs(i, j) - mean) * (xs(i, j) - mean);
    var /= 5.0;
    CHECK(std::fabs(mean) <= 1e-10);
    CHECK(std::fabs(std::sqrt(var) - 1.0) <= 1e-10);
  }
}

TEST_CASE("pca on collinear data") {
  kdr::CounterRng rng(21);
  Matrix x(12, 2);
  for (std::size_t i = 0; i < 12; ++i) {
    const double t = rng.next_normal();
    x(i, 0) = t;
    x(i, 1) = 2.0 * t;
  }
  const FitResult r = kdr::fit_pca(x, 2);
  // after standardization the line is the diagonal
  const double c = (r.projector.basis(0, 0) + r.projector.basis(1, 0)) / std::sqrt(2.0);
  CHECK(std::fabs(c) >= 1.0 - 1e-8);
  CHECK(r.projector.eigenvalues[1] <= 1e-10);
}

TEST_CASE("pca preserves total variance at d=p") {
  const Matrix x = random_matrix(10, 4, 345);
  const FitResult r = kdr::fit_pca(x, 4);
  const double sum = std::accumulate(r.projector.eigenvalues.begin(),
                                     r.projector.eigenvalues.end(), 0.0);
  // trace of the standardized covariance is the number of non-constant columns
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("pca projections match dense oracle") {
  const Matrix x = random_matrix(20, 5, 777);
  const FitResult r = kdr::fit_pca(x, 5);

  auto [s, xs] = kdr::standardize_fit(x);
  oracle::Mat cov = oracle::zeros(5, 5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      for (std::size_t i = 0; i < 20; ++i) cov[a][b] += xs(i, a) * xs(i, b);
      cov[a][b] /= 19.0;
    }
  const auto eig = oracle::dense_eig(cov);
  oracle::Mat proj = oracle::zeros(20, 5);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t f = 0; f < 5; ++f) proj[i][j] += xs(i, f) * eig.vectors[f][j];
  Matrix proj_m(20, 5);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 5; ++j) proj_m(i, j) = proj[i][j];
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(column_sign_diff(r.info.train_projections, j, proj_m, j) < 1e-8);
}

TEST_CASE("pca clamps d to feature count") {
  const Matrix x = random_matrix(9, 3, 31);
  const FitResult r = kdr::fit_pca(x, 100);
  CHECK(r.projector.d == 3);
  CHECK(has_warning(r, "DimensionClamped"));
}

TEST_CASE("lda separates two 1-D classes") {
  kdr::CounterRng rng(5150);
  Matrix x(20, 1);
  std::vector<int> y(20);
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = -1.0 + 0.05 * rng.next_normal();
    y[i] = 0;
    x(10 + i, 0) = 1.0 + 0.05 * rng.next_normal();
    y[10 + i] = 1;
  }
  const FitResult r = kdr::fit_lda(x, y, 1);
  double max0 = -1e300, min0 = 1e300, max1 = -1e300, min1 = 1e300;
  for (std::size_t i = 0; i < 20; ++i) {
    const double v = r.info.train_projections(i, 0);
    if (y[i] == 0) {
      max0 = std::max(max0, v);
      min0 = std::min(min0, v);
    } else {
      max1 = std::max(max1, v);
      min1 = std::min(min1, v);
    }
  }
  CHECK((max0 < min1 || max1 < min0));
}

TEST_CASE("lda clamps to class count minus one") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {4, 0}}, 8, 0.4, 61, y);
  const FitResult r = kdr::fit_lda(x, y, 2);
  CHECK(r.projector.d == 1);
  CHECK(has_warning(r, "DimensionClamped"));
  CHECK(r.projector.eigenvalues[0] > 0.0);
}

TEST_CASE("lda beats 1000 random directions on Fisher ratio") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {3, 1}, {-1, 3}}, 10, 0.5, 4242, y);
  const FitResult r = kdr::fit_lda(x, y, 2);

  // scatter matrices recomputed independently on the standardized data
  auto [s, xs] = kdr::standardize_fit(x);
  const std::size_t n = xs.rows();
  double gm[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (int f = 0; f < 2; ++f) gm[f] += xs(i, f) / double(n);
  double sb[2][2] = {{0, 0}, {0, 0}}, sw[2][2] = {{0, 0}, {0, 0}};
  for (int c = 0; c < 3; ++c) {
    double mu[2] = {0, 0};
    std::size_t nc = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] == c) {
        ++nc;
        for (int f = 0; f < 2; ++f) mu[f] += xs(i, f);
      }
    for (int f = 0; f < 2; ++f) mu[f] /= double(nc);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) sb[a][b] += double(nc) * (mu[a] - gm[a]) * (mu[b] - gm[b]);
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] == c)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) sw[a][b] += (xs(i, a) - mu[a]) * (xs(i, b) - mu[b]);
  }
  auto fisher = [&](double v0, double v1) {
    const double num = v0 * (sb[0][0] * v0 + sb[0][1] * v1) + v1 * (sb[1][0] * v0 + sb[1][1] * v1);
    const double den = v0 * (sw[0][0] * v0 + sw[0][1] * v1) + v1 * (sw[1][0] * v0 + sw[1][1] * v1);
    return num / den;
  };
  const double got = fisher(r.projector.basis(0, 0), r.projector.basis(1, 0));
  kdr::CounterRng rng(8899);
  for (int t = 0; t < 1000; ++t) {
    const double a = 2.0 * 3.14159265358979 * rng.next_double();
    CHECK(got >= fisher(std::cos(a), std::sin(a)) - 1e-9);
  }
}

TEST_CASE("lda label validation") {
  const Matrix x = random_matrix(6, 2, 99);
  std::vector<int> one_class(6, 0);
  CHECK_THROWS_AS(kdr::fit_lda(x, one_class, 1), Error);
  std::vector<int> tiny{0, 0, 0, 0, 0, 1};
  try {
    kdr::fit_lda(x, tiny, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSample);
  }
}

TEST_CASE("kpca with linear kernel reproduces pca") {
  const Matrix x = random_matrix(20, 5, 2718);
  const FitResult pca = kdr::fit_pca(x, 5);
  const FitResult kpca = kdr::fit_kpca(x, KernelSpec{KernelFamily::linear, 0.0}, 20);
  REQUIRE(kpca.projector.d == 5);  // rank of the centered Gram
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(column_sign_diff(kpca.info.train_projections, j, pca.info.train_projections, j) <
          1e-8);

  // holdout points agree too
  const Matrix holdout = random_matrix(7, 5, 2719);
  const Matrix tp = kdr::transform(pca.projector, holdout);
  const Matrix tk = kdr::transform(kpca.projector, holdout);
  for (std::size_t j = 0; j < 5; ++j) CHECK(column_sign_diff(tk, j, tp, j) < 1e-8);
}

TEST_CASE("kpca on a repeated point degenerates cleanly") {
  Matrix x(5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = -2.0;
  }
  const FitResult r = kdr::fit_kpca(x, KernelSpec{KernelFamily::rbf, 1.0}, 3);
  CHECK(r.projector.d == 0);
  CHECK(has_warning(r, "DimensionReduced"));
}

TEST_CASE("kpca transform reproduces stored projections") {
  const Matrix x = random_matrix(15, 3, 111);
  const FitResult r = kdr::fit_kpca(x, KernelSpec{KernelFamily::rbf, 0.6}, 10);
  const Matrix again = kdr::transform(r.projector, x);
  REQUIRE(again.cols() == r.projector.d);
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < r.projector.d; ++j)
      CHECK(std::fabs(again(i, j) - r.info.train_projections(i, j)) <= 1e-8);

  // eigenvalues are non-increasing
  for (std::size_t j = 0; j + 1 < r.projector.d; ++j)
    CHECK(r.projector.eigenvalues[j] >= r.projector.eigenvalues[j + 1]);
}

TEST_CASE("pca transform of the training mean is zero") {
  const Matrix x = random_matrix(9, 3, 55);
  const FitResult r = kdr::fit_pca(x, 3);
  Matrix mean(1, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < 9; ++i) m += x(i, j);
    mean(0, j) = m / 9.0;
  }
  const Matrix t = kdr::transform(r.projector, mean);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(t(0, j)) <= 1e-10);
}

TEST_CASE("fits are deterministic") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2, 2}}, 8, 0.6, 939, y);
  const KernelSpec k{KernelFamily::rbf, 1.2};
  const FitResult a = kdr::fit_kpca(x, k, 8);
  const FitResult b = kdr::fit_kpca(x, k, 8);
  CHECK(a.projector.basis == b.projector.basis);
  CHECK(a.projector.eigenvalues == b.projector.eigenvalues);
  const LinkSpec link{LinkKind::modified, 0.1, 1.2};
  const FitResult c = kdr::fit_skpca(x, y, k, link, 8);
  const FitResult d = kdr::fit_skpca(x, y, k, link, 8);
  CHECK(c.projector.basis == d.projector.basis);
  CHECK(c.info.train_projections == d.info.train_projections);
}

TEST_CASE("skpca indicator link with binary labels is rank deficient") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {3, 0}}, 10, 0.7, 314, y);
  const FitResult r = kdr::fit_skpca(x, y, KernelSpec{KernelFamily::rbf, 0.9}, LinkSpec{}, 5);
  // The bound is rank <= 2; for binary labels the centered class indicators
  // are exact negatives of each other, so the objective is in fact rank 1.
  CHECK(r.projector.d >= 1);
  CHECK(r.projector.d <= 2);
  CHECK(has_warning(r, "RankDeficient"));
}

TEST_CASE("skpca indicator rank ceiling is class count") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {3, 0}, {0, 3}}, 8, 0.6, 315, y);
  const FitResult r = kdr::fit_skpca(x, y, KernelSpec{KernelFamily::rbf, 0.8}, LinkSpec{}, 10);
  CHECK(r.projector.d <= 3);
}

TEST_CASE("skpca modified link unlocks more components") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2, 1}}, 15, 0.8, 3030, y);  // 30 points
  const KernelSpec k{KernelFamily::rbf, 0.5};
  const FitResult mod =
      kdr::fit_skpca(x, y, k, LinkSpec{LinkKind::modified, 1.0, 0.5}, 10);
  CHECK(mod.projector.d > 2);
}

TEST_CASE("skpca modified link at eta=0 equals indicator") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2, 1}}, 9, 0.5, 316, y);
  const KernelSpec k{KernelFamily::rbf, 1.0};
  const FitResult ind = kdr::fit_skpca(x, y, k, LinkSpec{}, 4);
  const FitResult mod = kdr::fit_skpca(x, y, k, LinkSpec{LinkKind::modified, 0.0, 1.0}, 4);
  CHECK(ind.projector.basis == mod.projector.basis);
  CHECK(ind.projector.d == mod.projector.d);
}

TEST_CASE("skpca projection depends on labels more than kpca's") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {1.2, 0.8}}, 15, 0.9, 1717, y);
  const KernelSpec k{KernelFamily::rbf, 0.7};
  const FitResult sk = kdr::fit_skpca(x, y, k, LinkSpec{LinkKind::modified, 0.01, 0.7}, 2);
  const FitResult kp = kdr::fit_kpca(x, k, 2);
  REQUIRE(sk.projector.d >= 1);
  REQUIRE(kp.projector.d >= 1);
  const double dep_sk = label_dependence(standardized_column(sk.info.train_projections, 0), y);
  const double dep_kp = label_dependence(standardized_column(kp.info.train_projections, 0), y);
  CHECK(dep_sk >= dep_kp);
}

TEST_CASE("skpca satisfies its generalized eigen equation") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2.5, 1}}, 8, 0.6, 808, y);
  const KernelSpec kspec{KernelFamily::rbf, 1.1};
  const LinkSpec link{LinkKind::modified, 0.5, 1.1};
  const FitResult r = kdr::fit_skpca(x, y, kspec, link, 3);

  const kdr::GramMatrix k = kdr::gram(kspec, r.projector.train_X);
  const kdr::LinkMatrix l = kdr::link_matrix(link, y, &r.projector.train_X);
  const kdr::SymMatrix a = kdr::skpca_objective_matrix(k, l);
  const double tol = 1e-8 * std::max(1.0, kdr::frobenius_norm(a.entries()));
  const std::size_t n = x.rows();
  for (std::size_t j = 0; j < r.projector.d; ++j) {
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0, bv = 0.0;
      for (std::size_t l2 = 0; l2 < n; ++l2) {
        av += a(i, l2) * r.projector.basis(l2, j);
        bv += k.entries(i, l2) * r.projector.basis(l2, j);
      }
      bv += r.info.ridge_used * r.projector.basis(i, j);
      const double res = av - r.projector.eigenvalues[j] * bv;
      rr += res * res;
    }
    CHECK(std::sqrt(rr) <= tol);
  }
}

TEST_CASE("klda binary labels keep one component") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2, 2}}, 8, 0.5, 404, y);
  const FitResult r = kdr::fit_klda(x, y, KernelSpec{KernelFamily::rbf, 1.0}, 4);
  CHECK(r.projector.d == 1);
  CHECK(has_warning(r, "RankDeficient"));
}

TEST_CASE("klda 3-class rank ceiling") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {3, 0}, {0, 3}}, 7, 0.5, 405, y);
  const FitResult r = kdr::fit_klda(x, y, KernelSpec{KernelFamily::rbf, 0.9}, 6);
  CHECK(r.projector.d <= 2);
}

TEST_CASE("klda with linear kernel orders points like lda") {
  kdr::CounterRng rng(646);
  Matrix x(16, 1);
  std::vector<int> y(16);
  for (std::size_t i = 0; i < 8; ++i) {
    x(i, 0) = -2.0 + 0.3 * rng.next_normal();
    y[i] = 0;
    x(8 + i, 0) = 2.0 + 0.3 * rng.next_normal();
    y[8 + i] = 1;
  }
  const FitResult lda = kdr::fit_lda(x, y, 1);
  const FitResult klda = kdr::fit_klda(x, y, KernelSpec{KernelFamily::linear, 0.0}, 1);
  REQUIRE(klda.projector.d == 1);
  std::vector<double> a(16), b(16);
  for (std::size_t i = 0; i < 16; ++i) {
    a[i] = lda.info.train_projections(i, 0);
    b[i] = klda.info.train_projections(i, 0);
  }
  const auto ra = ranks_of(a), rb = ranks_of(b);
  bool same = true, reversed = true;
  for (std::size_t i = 0; i < 16; ++i) {
    same = same && (ra[i] == rb[i]);
    reversed = reversed && (ra[i] == 15 - rb[i]);
  }
  CHECK((same || reversed));
}

TEST_CASE("klda transform reproduces stored projections") {
  std::vector<int> y;
  const Matrix x = blobs({{0, 0}, {2, -1}}, 9, 0.6, 272, y);
  const FitResult r = kdr::fit_klda(x, y, KernelSpec{KernelFamily::rbf, 0.8}, 3);
  const Matrix again = kdr::transform(r.projector, x);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < r.projector.d; ++j)
      CHECK(std::fabs(again(i, j) - r.info.train_projections(i, j)) <= 1e-8);
}

TEST_CASE("transform validates feature count") {
  const Matrix x = random_matrix(8, 3, 7);
  const FitResult r = kdr::fit_pca(x, 2);
  const Matrix wrong = random_matrix(2, 4, 8);
  CHECK_THROWS_AS(kdr::transform(r.projector, wrong), Error);
}
