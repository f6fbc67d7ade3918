#ifndef KDR_MATRIX_HPP
#define KDR_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "kdr/errors.hpp"

namespace kdr {

// Dense row-major matrix of doubles. Small by design: the toolkit only needs
// products, transposes and row views on desk-scale problems.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b without materializing the transpose.
Matrix matmul_ta(const Matrix& a, const Matrix& b);
// a * b^T without materializing the transpose.
Matrix matmul_tb(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double frobenius_norm(const Matrix& a);

// Extracts the rows listed in idx, preserving order.
Matrix take_rows(const Matrix& a, std::span<const std::size_t> idx);

}  // namespace kdr

#endif
