#ifndef KDR_NUMERICS_HPP
#define KDR_NUMERICS_HPP

#include <cstddef>
#include <vector>

#include "kdr/matrix.hpp"

namespace kdr {

// Square matrix validated to be symmetric within 1e-10 of max|entry|.
// Entries are exactly symmetrized on construction so downstream sweeps can
// rely on bitwise a(i,j) == a(j,i).
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);

  std::size_t dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

// Top-k eigenpairs, values sorted descending by signed value, vector columns
// unit-norm and paired positionally with values.
struct EigenPairs {
  std::vector<double> values;
  Matrix vectors;  // dim x k
};

struct EigOptions {
  // Problems up to this dimension use the dense Jacobi path; larger ones go
  // through Lanczos with full reorthogonalization.
  std::size_t dense_cutoff = 2048;
  std::size_t max_jacobi_sweeps = 64;
  std::size_t lanczos_max_dim = 5000;
  double residual_tol = 1e-8;  // relative to max(1, ||S||_F)
};

EigenPairs sym_eig(const SymMatrix& s, std::size_t k, const EigOptions& opts = {});

// Lower-triangular L with L L^T = S. Throws NotPositiveDefinite on a pivot <= 0.
Matrix cholesky(const SymMatrix& s);

// Solves A v = lambda (B + ridge I) v by Cholesky whitening. Returned vectors
// are unit-norm; residuals are checked against 1e-8 * max(1, ||A||_F).
EigenPairs gen_eig(const SymMatrix& a, const SymMatrix& b, std::size_t k,
                   double ridge = 0.0, const EigOptions& opts = {});

// In-place forward/back substitution helpers for a lower-triangular factor.
void solve_lower(const Matrix& l, std::span<double> x);
void solve_lower_transposed(const Matrix& l, std::span<double> x);

}  // namespace kdr

#endif
