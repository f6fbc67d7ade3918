#ifndef KDR_DIMRED_HPP
#define KDR_DIMRED_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdr/hsic.hpp"
#include "kdr/kernels.hpp"
#include "kdr/matrix.hpp"
#include "kdr/numerics.hpp"

namespace kdr {

enum class Method { pca, lda, kpca, skpca, klda };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;            // 1.0 for constant columns
  std::vector<std::uint8_t> constant;  // flags, parallel to columns
};

// Fitted model. basis is p x d for pca/lda and n x d (dual coefficients) for
// kernel methods. train_gram_row_means empty means transform uses uncentered
// kernel rows (klda convention, or kpca fitted with center=false).
struct Projector {
  Method method = Method::pca;
  std::size_t d = 0;
  Matrix basis;
  std::vector<double> eigenvalues;
  std::optional<KernelSpec> kernel;
  std::optional<LinkSpec> link;
  Matrix train_X;  // standardized training features, kernel methods only
  std::vector<double> train_col_means;
  std::vector<double> train_col_stds;
  std::vector<double> train_gram_row_means;
  double train_gram_total_mean = 0.0;
};

struct FitInfo {
  Matrix train_projections;  // n x d, by the same formulas transform uses
  double ridge_used = 0.0;
  std::size_t requested_d = 0;
  std::vector<std::string> warnings;
};

struct FitResult {
  Projector projector;
  FitInfo info;
};

std::pair<Standardizer, Matrix> standardize_fit(const Matrix& x);
Matrix standardize_apply(const Standardizer& s, const Matrix& x);

inline constexpr std::size_t kDefaultDim = 100;  // default retained dimension

FitResult fit_pca(const Matrix& x_raw, std::size_t d = kDefaultDim);
FitResult fit_lda(const Matrix& x_raw, std::span<const int> y, std::size_t d = kDefaultDim);
FitResult fit_kpca(const Matrix& x_raw, const KernelSpec& kernel,
                   std::size_t d = kDefaultDim, bool center = true);
FitResult fit_skpca(const Matrix& x_raw, std::span<const int> y, const KernelSpec& kernel,
                    const LinkSpec& link, std::size_t d = kDefaultDim);
FitResult fit_klda(const Matrix& x_raw, std::span<const int> y, const KernelSpec& kernel,
                   std::size_t d = kDefaultDim);

Matrix transform(const Projector& p, const Matrix& x_new);

}  // namespace kdr

#endif
