#include "kdr/matrix.hpp"

#include <cmath>

namespace kdr {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    raise(ErrorCode::DimensionMismatch, "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix matmul_ta(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    raise(ErrorCode::DimensionMismatch, "matmul_ta: inner dimensions differ");
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
  return c;
}

Matrix matmul_tb(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    raise(ErrorCode::DimensionMismatch, "matmul_tb: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = dot(a.row(i), b.row(j));
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size())
    raise(ErrorCode::DimensionMismatch, "matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.flat()) s += v * v;
  return std::sqrt(s);
}

Matrix take_rows(const Matrix& a, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = a.row(idx[i]);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
  }
  return out;
}

}  // namespace kdr
