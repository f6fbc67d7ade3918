#include "kdr/kernels.hpp"

#include <cmath>

namespace kdr {

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size())
    raise(ErrorCode::DimensionMismatch, "kernel_eval: vector lengths differ");
  if (spec.family == KernelFamily::linear) return dot(x, y);
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-spec.delta * d2);
}

GramMatrix gram(const KernelSpec& spec, const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = spec.family == KernelFamily::rbf ? 1.0 : dot(x.row(i), x.row(i));
    for (std::size_t j = i + 1; j < n; ++j)
      m(i, j) = m(j, i) = kernel_eval(spec, x.row(i), x.row(j));
  }
  return GramMatrix{SymMatrix(std::move(m)), false};
}

GramMatrix center_gram(const GramMatrix& k, bool force) {
  if (k.centered && !force)
    raise(ErrorCode::AlreadyCentered, "center_gram: input already centered");
  const std::size_t n = k.n();
  const GramStats st = gram_stats(k);
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out(i, j) = out(j, i) =
          k.entries(i, j) - (st.row_means[i] + st.row_means[j]) + st.total_mean;
  return GramMatrix{SymMatrix(std::move(out)), true};
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& x_train, const Matrix& x_test) {
  if (x_train.cols() != x_test.cols())
    raise(ErrorCode::DimensionMismatch, "cross_gram: feature counts differ");
  Matrix out(x_test.rows(), x_train.rows());
  for (std::size_t i = 0; i < x_test.rows(); ++i)
    for (std::size_t j = 0; j < x_train.rows(); ++j)
      out(i, j) = kernel_eval(spec, x_test.row(i), x_train.row(j));
  return out;
}

GramStats gram_stats(const GramMatrix& k) {
  const std::size_t n = k.n();
  GramStats st;
  st.row_means.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += k.entries(i, j);
    st.row_means[i] = s / double(n);
    total += s;
  }
  st.total_mean = total / double(n * n);
  return st;
}

Matrix center_cross(const GramStats& stats, const Matrix& k_cross) {
  const std::size_t n = stats.row_means.size();
  if (k_cross.cols() != n)
    raise(ErrorCode::DimensionMismatch, "center_cross: column count mismatch");
  Matrix out(k_cross.rows(), n);
  for (std::size_t i = 0; i < k_cross.rows(); ++i) {
    double cm = 0.0;
    for (std::size_t j = 0; j < n; ++j) cm += k_cross(i, j);
    cm /= double(n);
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = k_cross(i, j) - cm - stats.row_means[j] + stats.total_mean;
  }
  return out;
}

Matrix center_cross(const GramMatrix& k_train_uncentered, const Matrix& k_cross) {
  return center_cross(gram_stats(k_train_uncentered), k_cross);
}

}  // namespace kdr
