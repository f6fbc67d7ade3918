#ifndef KDR_KERNELS_HPP
#define KDR_KERNELS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "kdr/matrix.hpp"
#include "kdr/numerics.hpp"

namespace kdr {

enum class KernelFamily { rbf, linear };

// Canonical sign convention: rbf k(x,y) = exp(-delta * ||x-y||^2). Negative
// delta is allowed and yields an indefinite operator; callers that quote the
// positive-exponent form translate by negating delta.
struct KernelSpec {
  KernelFamily family = KernelFamily::rbf;
  double delta = 1.0;
};

struct GramMatrix {
  SymMatrix entries;
  bool centered = false;

  std::size_t n() const { return entries.dim(); }
};

// Row means and total mean of an uncentered training Gram; enough to center
// test-point kernel rows against the training sample later.
struct GramStats {
  std::vector<double> row_means;
  double total_mean = 0.0;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

GramMatrix gram(const KernelSpec& spec, const Matrix& x);

// K* = H K H. force recenters an already-centered input instead of raising.
GramMatrix center_gram(const GramMatrix& k, bool force = false);

// entry[i][j] = k(x_test_i, x_train_j); shape m x n.
Matrix cross_gram(const KernelSpec& spec, const Matrix& x_train, const Matrix& x_test);

GramStats gram_stats(const GramMatrix& k_uncentered);

// Centers test kernel rows against the training sample:
// out(i,j) = C(i,j) - mean_j'(C(i,j')) - row_mean_j(K) + total_mean(K).
Matrix center_cross(const GramStats& stats, const Matrix& k_cross);
Matrix center_cross(const GramMatrix& k_train_uncentered, const Matrix& k_cross);

}  // namespace kdr

#endif
