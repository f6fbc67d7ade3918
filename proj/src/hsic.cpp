#include "kdr/hsic.hpp"

#include <cmath>

namespace kdr {
namespace {

// H L H by the row-means identity, exactly symmetric.
Matrix center_sym(const SymMatrix& l) {
  const std::size_t n = l.dim();
  std::vector<double> rm(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += l(i, j);
    rm[i] = s / double(n);
    total += s;
  }
  const double tm = total / double(n * n);
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out(i, j) = out(j, i) = l(i, j) - (rm[i] + rm[j]) + tm;
  return out;
}

}  // namespace

LinkMatrix link_matrix(const LinkSpec& spec, std::span<const int> y, const Matrix* x) {
  const std::size_t n = y.size();
  if (spec.kind == LinkKind::modified) {
    if (x == nullptr)
      raise(ErrorCode::MissingFeatures, "modified link needs the feature matrix");
    if (x->rows() != n)
      raise(ErrorCode::SizeMismatch, "link_matrix: label count differs from feature rows");
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (y[i] == y[j]) {
        if (spec.kind == LinkKind::indicator) {
          v = 1.0;
        } else {
          double d2 = 0.0;
          for (std::size_t f = 0; f < x->cols(); ++f) {
            const double d = (*x)(i, f) - (*x)(j, f);
            d2 += d * d;
          }
          v = std::exp(-spec.eta * spec.delta * d2);
        }
      }
      m(i, j) = m(j, i) = v;
    }
  }
  return LinkMatrix{SymMatrix(std::move(m))};
}

double hsic_empirical(const GramMatrix& k, const LinkMatrix& l) {
  const std::size_t n = k.n();
  if (l.n() != n) raise(ErrorCode::SizeMismatch, "hsic: Gram and link sizes differ");
  if (n < 2) raise(ErrorCode::DegenerateSample, "hsic needs at least 2 samples");
  const Matrix lc = center_sym(l.entries);
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tr += k.entries(i, j) * lc(j, i);
  const double nm1 = double(n - 1);
  return tr / (nm1 * nm1);
}

SymMatrix skpca_objective_matrix(const GramMatrix& k, const LinkMatrix& l) {
  const std::size_t n = k.n();
  if (l.n() != n) raise(ErrorCode::SizeMismatch, "skpca objective: sizes differ");
  const Matrix lc = center_sym(l.entries);
  const Matrix a = matmul(k.entries.entries(), matmul(lc, k.entries.entries()));
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) sym(i, j) = sym(j, i) = 0.5 * (a(i, j) + a(j, i));
  return SymMatrix(std::move(sym));
}

}  // namespace kdr
