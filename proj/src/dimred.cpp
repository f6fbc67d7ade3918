#include "kdr/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kdr {
namespace {

constexpr double kRankCutoff = 1e-8;  // relative eigenvalue cutoff for rank decisions

struct ClassIndex {
  std::vector<int> labels;                   // distinct, ascending
  std::vector<std::vector<std::size_t>> members;
};

ClassIndex index_classes(std::span<const int> y, std::size_t min_members) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < y.size(); ++i) groups[y[i]].push_back(i);
  if (groups.size() < 2) raise(ErrorCode::TooFewClasses, "need at least 2 classes");
  ClassIndex idx;
  for (auto& [label, members] : groups) {
    if (members.size() < min_members)
      raise(ErrorCode::DegenerateSample,
            "class " + std::to_string(label) + " has fewer than " +
                std::to_string(min_members) + " members");
    idx.labels.push_back(label);
    idx.members.push_back(std::move(members));
  }
  return idx;
}

std::size_t clamp_dim(std::size_t requested, std::size_t ceiling, FitInfo& info,
                      const std::string& why) {
  if (requested <= ceiling) return requested;
  info.warnings.push_back("DimensionClamped: requested " + std::to_string(requested) +
                          ", using " + std::to_string(ceiling) + " (" + why + ")");
  return ceiling;
}

// Ridge escalation: 0, then 1e-10 through 1e-4 in decade steps. On exhaustion
// raises exhaust_code if given, otherwise rethrows the last solver error.
EigenPairs gen_eig_escalating(const SymMatrix& a, const SymMatrix& b, std::size_t k,
                              FitInfo& info, std::optional<ErrorCode> exhaust_code) {
  std::vector<double> ridges{0.0};
  for (double r = 1e-10; r <= 1.0000001e-4; r *= 10.0) ridges.push_back(r);
  for (std::size_t i = 0; i < ridges.size(); ++i) {
    try {
      EigenPairs pairs = gen_eig(a, b, k, ridges[i]);
      info.ridge_used = ridges[i];
      if (ridges[i] > 0.0)
        info.warnings.push_back("RidgeApplied: " + std::to_string(ridges[i]));
      return pairs;
    } catch (const Error& e) {
      const bool retryable = e.code() == ErrorCode::NotPositiveDefinite ||
                             e.code() == ErrorCode::ConvergenceFailure;
      if (!retryable || i + 1 == ridges.size()) {
        if (retryable && exhaust_code)
          raise(*exhaust_code, "ridge escalation exhausted: " + std::string(e.what()));
        throw;
      }
    }
  }
  raise(ErrorCode::SingularWithin, "unreachable");
}

// Keeps leading pairs with value > cutoff_rel * values[0]; returns kept count.
std::size_t usable_rank(const std::vector<double>& values, double cutoff_rel) {
  if (values.empty()) return 0;
  const double head = values[0];
  if (head <= 0.0) return 0;
  std::size_t kept = 0;
  for (double v : values)
    if (v > cutoff_rel * head) ++kept;
  return kept;
}

Matrix keep_columns(const Matrix& m, std::size_t k) {
  Matrix out(m.rows(), k);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::pca: return "pca";
    case Method::lda: return "lda";
    case Method::kpca: return "kpca";
    case Method::skpca: return "skpca";
    case Method::klda: return "klda";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "pca") return Method::pca;
  if (name == "lda") return Method::lda;
  if (name == "kpca") return Method::kpca;
  if (name == "skpca") return Method::skpca;
  if (name == "klda") return Method::klda;
  raise(ErrorCode::InvalidArgument, "unknown method: " + name);
}

std::pair<Standardizer, Matrix> standardize_fit(const Matrix& x) {
  const std::size_t n = x.rows(), p = x.cols();
  if (n < 2) raise(ErrorCode::DegenerateSample, "standardize needs at least 2 rows");
  Standardizer s;
  s.means.resize(p);
  s.stds.resize(p);
  s.constant.assign(p, 0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= double(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x(i, j) - mean;
      var += d * d;
    }
    var /= double(n - 1);
    const double std = std::sqrt(var);
    s.means[j] = mean;
    if (std < 1e-12 * std::max(1.0, std::fabs(mean))) {
      s.stds[j] = 1.0;
      s.constant[j] = 1;
    } else {
      s.stds[j] = std;
    }
  }
  Matrix out(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      out(i, j) = s.constant[j] ? 0.0 : (x(i, j) - s.means[j]) / s.stds[j];
  return {std::move(s), std::move(out)};
}

Matrix standardize_apply(const Standardizer& s, const Matrix& x) {
  if (x.cols() != s.means.size())
    raise(ErrorCode::DimensionMismatch, "standardize_apply: column count differs");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      out(i, j) = s.constant[j] ? 0.0 : (x(i, j) - s.means[j]) / s.stds[j];
  return out;
}

FitResult fit_pca(const Matrix& x_raw, std::size_t d) {
  FitResult r;
  r.info.requested_d = d;
  auto [std_, xs] = standardize_fit(x_raw);
  const std::size_t n = xs.rows(), p = xs.cols();
  if (std::count(std_.constant.begin(), std_.constant.end(), 1) > 0)
    r.info.warnings.push_back("ConstantColumns: zeroed in standardization");

  const std::size_t k = clamp_dim(d, p, r.info, "d cannot exceed feature count");
  Matrix cov = matmul_ta(xs, xs);
  for (auto& v : cov.flat()) v /= double(n - 1);
  const EigenPairs pairs = sym_eig(SymMatrix(std::move(cov)), k);

  r.projector.method = Method::pca;
  r.projector.d = k;
  r.projector.basis = pairs.vectors;
  r.projector.eigenvalues = pairs.values;
  r.projector.train_col_means = std_.means;
  r.projector.train_col_stds = std_.stds;
  r.info.train_projections = matmul(xs, pairs.vectors);
  return r;
}

FitResult fit_lda(const Matrix& x_raw, std::span<const int> y, std::size_t d) {
  if (y.size() != x_raw.rows())
    raise(ErrorCode::SizeMismatch, "fit_lda: label count differs from rows");
  FitResult r;
  r.info.requested_d = d;
  auto [std_, xs] = standardize_fit(x_raw);
  const std::size_t n = xs.rows(), p = xs.cols();
  const ClassIndex classes = index_classes(y, 2);
  const std::size_t c = classes.labels.size();

  std::vector<double> global_mean(p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) global_mean[j] += xs(i, j) / double(n);

  Matrix sb(p, p), sw(p, p);
  for (std::size_t ci = 0; ci < c; ++ci) {
    const auto& members = classes.members[ci];
    const double nc = double(members.size());
    std::vector<double> mu(p, 0.0);
    for (std::size_t i : members)
      for (std::size_t j = 0; j < p; ++j) mu[j] += xs(i, j) / nc;
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) {
        const double v = nc * (mu[a] - global_mean[a]) * (mu[b] - global_mean[b]);
        sb(a, b) += v;
        if (b != a) sb(b, a) += v;
      }
    for (std::size_t i : members)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a; b < p; ++b) {
          const double v = (xs(i, a) - mu[a]) * (xs(i, b) - mu[b]);
          sw(a, b) += v;
          if (b != a) sw(b, a) += v;
        }
  }

  std::size_t k = clamp_dim(d, c - 1, r.info, "lda rank is class count minus 1");
  k = clamp_dim(k, p, r.info, "d cannot exceed feature count");
  const EigenPairs pairs = gen_eig_escalating(SymMatrix(std::move(sb)), SymMatrix(std::move(sw)),
                                              k, r.info, ErrorCode::SingularWithin);

  r.projector.method = Method::lda;
  r.projector.d = k;
  r.projector.basis = pairs.vectors;
  r.projector.eigenvalues = pairs.values;
  r.projector.train_col_means = std_.means;
  r.projector.train_col_stds = std_.stds;
  r.info.train_projections = matmul(xs, pairs.vectors);
  return r;
}

FitResult fit_kpca(const Matrix& x_raw, const KernelSpec& kernel, std::size_t d,
                   bool center) {
  FitResult r;
  r.info.requested_d = d;
  auto [std_, xs] = standardize_fit(x_raw);
  const std::size_t n = xs.rows();

  const GramMatrix k_raw = gram(kernel, xs);
  GramStats stats;
  std::optional<GramMatrix> k_centered;
  if (center) {
    stats = gram_stats(k_raw);
    k_centered = center_gram(k_raw);
  }
  const GramMatrix* solve_on = k_centered ? &*k_centered : &k_raw;

  const std::size_t k = clamp_dim(d, n, r.info, "d cannot exceed sample count");
  const EigenPairs pairs = sym_eig(solve_on->entries, k);

  // Keep components with lambda above lambda_1 * 1e-12; scale alpha by
  // 1/sqrt(lambda) for unit feature-space norm.
  const double head = pairs.values.empty() ? 0.0 : pairs.values[0];
  std::size_t kept = 0;
  for (double v : pairs.values)
    if (v > head * 1e-12 && v > 0.0) ++kept;
  if (kept < k)
    r.info.warnings.push_back("DimensionReduced: " + std::to_string(k - kept) +
                              " near-zero component(s) dropped");
  Matrix basis(n, kept);
  std::vector<double> values(kept);
  for (std::size_t j = 0; j < kept; ++j) {
    values[j] = pairs.values[j];
    const double scale = 1.0 / std::sqrt(pairs.values[j]);
    for (std::size_t i = 0; i < n; ++i) basis(i, j) = pairs.vectors(i, j) * scale;
  }

  r.projector.method = Method::kpca;
  r.projector.d = kept;
  r.projector.basis = std::move(basis);
  r.projector.eigenvalues = std::move(values);
  r.projector.kernel = kernel;
  r.projector.train_X = xs;
  r.projector.train_col_means = std_.means;
  r.projector.train_col_stds = std_.stds;
  if (center) {
    r.projector.train_gram_row_means = stats.row_means;
    r.projector.train_gram_total_mean = stats.total_mean;
  }
  r.info.train_projections = matmul(solve_on->entries.entries(), r.projector.basis);
  return r;
}

FitResult fit_skpca(const Matrix& x_raw, std::span<const int> y, const KernelSpec& kernel,
                    const LinkSpec& link, std::size_t d) {
  if (y.size() != x_raw.rows())
    raise(ErrorCode::SizeMismatch, "fit_skpca: label count differs from rows");
  FitResult r;
  r.info.requested_d = d;
  auto [std_, xs] = standardize_fit(x_raw);
  const std::size_t n = xs.rows();

  const GramMatrix k_raw = gram(kernel, xs);
  const GramStats stats = gram_stats(k_raw);
  const LinkMatrix l = link_matrix(link, y, &xs);
  const SymMatrix a = skpca_objective_matrix(k_raw, l);

  const std::size_t k = clamp_dim(d, n, r.info, "d cannot exceed sample count");
  const EigenPairs pairs = gen_eig_escalating(a, k_raw.entries, k, r.info, std::nullopt);

  const std::size_t kept = usable_rank(pairs.values, kRankCutoff);
  if (kept < k)
    r.info.warnings.push_back("RankDeficient: " + std::to_string(kept) +
                              " usable component(s) of " + std::to_string(k) +
                              " requested");
  r.projector.method = Method::skpca;
  r.projector.d = kept;
  r.projector.basis = keep_columns(pairs.vectors, kept);
  r.projector.eigenvalues.assign(pairs.values.begin(), pairs.values.begin() + kept);
  r.projector.kernel = kernel;
  r.projector.link = link;
  r.projector.train_X = xs;
  r.projector.train_col_means = std_.means;
  r.projector.train_col_stds = std_.stds;
  r.projector.train_gram_row_means = stats.row_means;
  r.projector.train_gram_total_mean = stats.total_mean;

  const GramMatrix k_centered = center_gram(k_raw);
  r.info.train_projections = matmul(k_centered.entries.entries(), r.projector.basis);
  return r;
}

FitResult fit_klda(const Matrix& x_raw, std::span<const int> y, const KernelSpec& kernel,
                   std::size_t d) {
  if (y.size() != x_raw.rows())
    raise(ErrorCode::SizeMismatch, "fit_klda: label count differs from rows");
  FitResult r;
  r.info.requested_d = d;
  auto [std_, xs] = standardize_fit(x_raw);
  const std::size_t n = xs.rows();
  const ClassIndex classes = index_classes(y, 2);
  const std::size_t c = classes.labels.size();

  const GramMatrix k_raw = gram(kernel, xs);

  // M_c = class mean kernel column, M-bar = global mean column,
  // M = sum_c n_c (M_c - Mbar)(M_c - Mbar)^T.
  std::vector<double> mbar(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mbar[i] += k_raw.entries(i, j) / double(n);
  Matrix m(n, n);
  std::vector<std::vector<double>> class_means(c, std::vector<double>(n, 0.0));
  for (std::size_t ci = 0; ci < c; ++ci) {
    const auto& members = classes.members[ci];
    const double nc = double(members.size());
    auto& mc = class_means[ci];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : members) mc[i] += k_raw.entries(i, j);
      mc[i] /= nc;
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        const double v = nc * (mc[a] - mbar[a]) * (mc[b] - mbar[b]);
        m(a, b) += v;
        if (b != a) m(b, a) += v;
      }
  }

  // N = sum_c W_c W_c^T with W_c = K_c minus its per-row class means.
  Matrix nmat(n, n);
  for (std::size_t ci = 0; ci < c; ++ci) {
    const auto& members = classes.members[ci];
    Matrix w(n, members.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < members.size(); ++jj)
        w(i, jj) = k_raw.entries(i, members[jj]) - class_means[ci][i];
    const Matrix wwt = matmul_tb(w, w);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) nmat(a, b) += wwt(a, b);
  }

  const std::size_t k = clamp_dim(d, n, r.info, "d cannot exceed sample count");
  const EigenPairs pairs = gen_eig_escalating(SymMatrix(std::move(m)), SymMatrix(std::move(nmat)),
                                              k, r.info, ErrorCode::SingularWithin);

  const std::size_t kept = usable_rank(pairs.values, kRankCutoff);
  if (kept < k)
    r.info.warnings.push_back("RankDeficient: " + std::to_string(kept) +
                              " usable component(s) of " + std::to_string(k) +
                              " requested");
  r.projector.method = Method::klda;
  r.projector.d = kept;
  r.projector.basis = keep_columns(pairs.vectors, kept);
  r.projector.eigenvalues.assign(pairs.values.begin(), pairs.values.begin() + kept);
  r.projector.kernel = kernel;
  r.projector.train_X = xs;
  r.projector.train_col_means = std_.means;
  r.projector.train_col_stds = std_.stds;
  // klda projects through uncentered kernel rows; no centering stats stored.
  r.info.train_projections = matmul(k_raw.entries.entries(), r.projector.basis);
  return r;
}

Matrix transform(const Projector& p, const Matrix& x_new) {
  if (x_new.cols() != p.train_col_means.size())
    raise(ErrorCode::DimensionMismatch, "transform: feature count differs from fit");
  Standardizer s;
  s.means = p.train_col_means;
  s.stds = p.train_col_stds;
  s.constant.assign(s.means.size(), 0);
  const Matrix xs = standardize_apply(s, x_new);

  if (p.method == Method::pca || p.method == Method::lda) return matmul(xs, p.basis);

  const Matrix cross = cross_gram(*p.kernel, p.train_X, xs);
  if (p.train_gram_row_means.empty()) return matmul(cross, p.basis);
  GramStats stats;
  stats.row_means = p.train_gram_row_means;
  stats.total_mean = p.train_gram_total_mean;
  return matmul(center_cross(stats, cross), p.basis);
}

}  // namespace kdr
