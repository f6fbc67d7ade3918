#include "doctest.h"

#include <cmath>
#include <vector>

#include "kdr/kernels.hpp"
#include "kdr/numerics.hpp"
#include "kdr/rng.hpp"
#include "oracles.hpp"

using kdr::Error;
using kdr::ErrorCode;
using kdr::GramMatrix;
using kdr::KernelFamily;
using kdr::KernelSpec;
using kdr::Matrix;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  kdr::CounterRng rng(seed);
  Matrix m(r, c);
  for (auto& x : m.flat()) x = rng.next_normal();
  return m;
}

}  // namespace

TEST_CASE("kernel_eval frozen cases") {
  const KernelSpec rbf{KernelFamily::rbf, 1.0};
  const std::vector<double> z{0.0}, one{1.0};
  CHECK(kdr::kernel_eval(rbf, z, z) == 1.0);
  CHECK(kdr::kernel_eval(rbf, z, one) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const KernelSpec rbf_neg{KernelFamily::rbf, -2.5};
  const std::vector<double> p{1.5, -2.0};
  CHECK(kdr::kernel_eval(rbf_neg, p, p) == 1.0);

  const KernelSpec lin{KernelFamily::linear, 0.0};
  const std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
  CHECK(kdr::kernel_eval(lin, a, b) == 11.0);

  CHECK_THROWS_AS(kdr::kernel_eval(lin, a, z), Error);
}

TEST_CASE("gram construction") {
  const KernelSpec rbf{KernelFamily::rbf, 1.0};
  Matrix single(1, 1);
  single(0, 0) = 3.7;
  const GramMatrix g1 = kdr::gram(rbf, single);
  CHECK(g1.n() == 1);
  CHECK(g1.entries(0, 0) == 1.0);
  CHECK_FALSE(g1.centered);

  Matrix x(2, 1);
  x(1, 0) = 1.0;
  const GramMatrix g2 = kdr::gram(rbf, x);
  CHECK(g2.entries(0, 0) == 1.0);
  CHECK(g2.entries(1, 1) == 1.0);
  CHECK(g2.entries(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(g2.entries(1, 0) == g2.entries(0, 1));

  // linear gram equals X X^T
  const Matrix xs = random_matrix(4, 2, 321);
  const GramMatrix gl = kdr::gram(KernelSpec{KernelFamily::linear, 0.0}, xs);
  const Matrix xxt = kdr::matmul_tb(xs, xs);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(gl.entries(i, j) == doctest::Approx(xxt(i, j)).epsilon(1e-12));

  // rbf diagonal is exactly 1 regardless of delta sign
  for (double delta : {-3.0, 0.5, 7.0}) {
    const GramMatrix gd = kdr::gram(KernelSpec{KernelFamily::rbf, delta}, xs);
    for (std::size_t i = 0; i < 4; ++i) CHECK(gd.entries(i, i) == 1.0);
  }
}

TEST_CASE("center_gram frozen cases and oracle") {
  Matrix ones(3, 3, 1.0);
  const GramMatrix gones{kdr::SymMatrix(ones), false};
  const GramMatrix cones = kdr::center_gram(gones);
  CHECK(cones.centered);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(cones.entries(i, j)) < 1e-14);

  const GramMatrix gid{kdr::SymMatrix(Matrix::identity(2)), false};
  const GramMatrix cid = kdr::center_gram(gid);
  CHECK(cid.entries(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cid.entries(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(cid.entries(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(cid.entries(1, 1) == doctest::Approx(0.5).epsilon(1e-14));

  // seeded 5x5 symmetric vs explicit H K H
  kdr::CounterRng rng(606);
  Matrix k(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) k(i, j) = k(j, i) = rng.next_normal();
  const GramMatrix gk{kdr::SymMatrix(k), false};
  const GramMatrix ck = kdr::center_gram(gk);

  oracle::Mat h = oracle::identity(5);
  for (auto& row : h)
    for (auto& v : row) v -= 0.2;
  oracle::Mat ko = oracle::zeros(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) ko[i][j] = gk.entries(i, j);
  const oracle::Mat hkh = oracle::mul(oracle::mul(h, ko), h);
  double max_entry = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(ck.entries(i, j) == doctest::Approx(hkh[i][j]).epsilon(1e-12));
      max_entry = std::max(max_entry, std::fabs(ck.entries(i, j)));
    }

  // row/column sums vanish
  for (std::size_t i = 0; i < 5; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < 5; ++j) rs += ck.entries(i, j);
    CHECK(std::fabs(rs) <= 1e-8 * 5.0 * max_entry);
  }

  CHECK_THROWS_AS(kdr::center_gram(ck), Error);
  // idempotent under force
  const GramMatrix ck2 = kdr::center_gram(ck, true);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(std::fabs(ck2.entries(i, j) - ck.entries(i, j)) <= 1e-10);
}

TEST_CASE("cross_gram agrees with gram and per-entry oracle") {
  const KernelSpec rbf{KernelFamily::rbf, 0.7};
  const Matrix xt = random_matrix(4, 2, 17);
  const Matrix cross_self = kdr::cross_gram(rbf, xt, xt);
  const GramMatrix g = kdr::gram(rbf, xt);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(cross_self(i, j) == doctest::Approx(g.entries(i, j)).epsilon(1e-14));

  // test point equal to a training point: that entry is exactly 1
  Matrix xtest(1, 2);
  xtest(0, 0) = xt(2, 0);
  xtest(0, 1) = xt(2, 1);
  const Matrix c1 = kdr::cross_gram(rbf, xt, xtest);
  CHECK(c1(0, 2) == 1.0);

  const Matrix xtest3 = random_matrix(3, 2, 18);
  const Matrix c = kdr::cross_gram(rbf, xt, xtest3);
  REQUIRE(c.rows() == 3);
  REQUIRE(c.cols() == 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(c(i, j) ==
            doctest::Approx(kdr::kernel_eval(rbf, xtest3.row(i), xt.row(j))).epsilon(1e-12));

  Matrix wrong(2, 3);
  CHECK_THROWS_AS(kdr::cross_gram(rbf, xt, wrong), Error);
}

TEST_CASE("center_cross consistency and phi-space oracle") {
  const KernelSpec rbf{KernelFamily::rbf, 0.9};
  const Matrix xt = random_matrix(5, 3, 44);
  const GramMatrix g = kdr::gram(rbf, xt);
  const GramMatrix cg = kdr::center_gram(g);

  // a cross matrix made of training rows centers to the matching centered rows
  const Matrix cross_self = kdr::cross_gram(rbf, xt, xt);
  const Matrix centered_cross = kdr::center_cross(g, cross_self);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(centered_cross(i, j) == doctest::Approx(cg.entries(i, j)).epsilon(1e-12));

  // constants annihilate
  Matrix kc(2, 5, 3.25);
  Matrix kk(5, 5, 3.25);
  const Matrix zero = kdr::center_cross(GramMatrix{kdr::SymMatrix(kk), false}, kc);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::fabs(zero(i, j)) < 1e-12);

  // linear kernel: centering the Gram equals centering the features
  const KernelSpec lin{KernelFamily::linear, 0.0};
  const Matrix lt = random_matrix(6, 2, 71);
  const Matrix ls = random_matrix(3, 2, 72);
  const GramMatrix lg = kdr::gram(lin, lt);
  const Matrix lc = kdr::center_cross(lg, kdr::cross_gram(lin, lt, ls));
  std::vector<double> mu(2, 0.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 2; ++j) mu[j] += lt(i, j) / 6.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double want = 0.0;
      for (std::size_t f = 0; f < 2; ++f)
        want += (ls(i, f) - mu[f]) * (lt(j, f) - mu[f]);
      CHECK(lc(i, j) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("rbf gram with positive delta is PSD") {
  const Matrix x = random_matrix(12, 3, 2001);
  const GramMatrix g = kdr::gram(KernelSpec{KernelFamily::rbf, 1.3}, x);
  const auto pairs = kdr::sym_eig(g.entries, 12);
  for (double v : pairs.values) CHECK(v >= -1e-8 * 12.0);
}
