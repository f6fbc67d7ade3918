#include "kdr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kdr/rng.hpp"

namespace kdr {
namespace {

Matrix exact_symmetrize(Matrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

// Cyclic Jacobi with thresholding. Diagonalizes a in place; columns of v end
// up as the eigenvectors of the input.
void jacobi_eig(Matrix a, std::vector<double>& d, Matrix& v, std::size_t max_sweeps) {
  const std::size_t n = a.rows();
  v = Matrix::identity(n);
  d.assign(n, 0.0);
  std::vector<double> b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) b[i] = d[i] = a(i, i);

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::fabs(a(p, q));
    if (off == 0.0) {
      for (std::size_t i = 0; i < n; ++i) a(i, i) = d[i];
      return;
    }
    const double tresh = sweep < 3 ? 0.2 * off / double(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::fabs(a(p, q));
        if (sweep > 3 && std::fabs(d[p]) + g == std::fabs(d[p]) &&
            std::fabs(d[q]) + g == std::fabs(d[q])) {
          a(p, q) = 0.0;
        } else if (std::fabs(a(p, q)) > tresh) {
          double h = d[q] - d[p];
          double t;
          if (std::fabs(h) + g == std::fabs(h)) {
            t = a(p, q) / h;
          } else {
            const double theta = 0.5 * h / a(p, q);
            t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          const double tau = s / (1.0 + c);
          h = t * a(p, q);
          z[p] -= h;
          z[q] += h;
          d[p] -= h;
          d[q] += h;
          a(p, q) = 0.0;
          auto rotate = [&](Matrix& m, std::size_t i1, std::size_t j1, std::size_t i2,
                            std::size_t j2) {
            const double g1 = m(i1, j1);
            const double g2 = m(i2, j2);
            m(i1, j1) = g1 - s * (g2 + g1 * tau);
            m(i2, j2) = g2 + s * (g1 - g2 * tau);
          };
          for (std::size_t j = 0; j < p; ++j) rotate(a, j, p, j, q);
          for (std::size_t j = p + 1; j < q; ++j) rotate(a, p, j, j, q);
          for (std::size_t j = q + 1; j < n; ++j) rotate(a, p, j, q, j);
          for (std::size_t j = 0; j < n; ++j) rotate(v, j, p, j, q);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      b[i] += z[i];
      d[i] = b[i];
      z[i] = 0.0;
    }
  }
  raise(ErrorCode::ConvergenceFailure, "Jacobi sweeps exhausted");
}

// Stable order: descending signed value, original index breaks ties.
std::vector<std::size_t> order_descending(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

void canonicalize_column_sign(Matrix& vectors, std::size_t col) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    const double m = std::fabs(vectors(i, col));
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  if (vectors(arg, col) < 0.0)
    for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, col) = -vectors(i, col);
}

void normalize_column(Matrix& vectors, std::size_t col) {
  double s = 0.0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) s += vectors(i, col) * vectors(i, col);
  s = std::sqrt(s);
  if (s > 0.0)
    for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, col) /= s;
}

void check_residuals(const SymMatrix& s, const EigenPairs& pairs, double tol_scale) {
  const std::size_t n = s.dim();
  for (std::size_t j = 0; j < pairs.values.size(); ++j) {
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sv = 0.0;
      for (std::size_t l = 0; l < n; ++l) sv += s(i, l) * pairs.vectors(l, j);
      const double r = sv - pairs.values[j] * pairs.vectors(i, j);
      rr += r * r;
    }
    if (std::sqrt(rr) > tol_scale)
      raise(ErrorCode::ConvergenceFailure, "eigenpair residual above tolerance");
  }
}

EigenPairs dense_topk(const SymMatrix& s, std::size_t k, const EigOptions& opts) {
  std::vector<double> d;
  Matrix v;
  jacobi_eig(s.entries(), d, v, opts.max_jacobi_sweeps);
  const auto idx = order_descending(d);
  EigenPairs out;
  out.values.resize(k);
  out.vectors = Matrix(s.dim(), k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = d[idx[j]];
    for (std::size_t i = 0; i < s.dim(); ++i) out.vectors(i, j) = v(i, idx[j]);
    normalize_column(out.vectors, j);
    canonicalize_column_sign(out.vectors, j);
  }
  return out;
}

// Lanczos with full reorthogonalization. Breakdowns start a fresh tridiagonal
// block from a deterministic direction orthogonal to everything found so far,
// so invariant subspaces of low-rank operators do not stall the iteration.
EigenPairs lanczos_topk(const SymMatrix& s, std::size_t k, const EigOptions& opts) {
  const std::size_t n = s.dim();
  const double fnorm = frobenius_norm(s.entries());
  const double tol = opts.residual_tol * std::max(1.0, fnorm);
  const double breakdown = 1e-12 * std::max(1.0, fnorm);

  std::size_t m = std::min(n, std::max<std::size_t>(2 * k + 32, 64));
  while (true) {
    if (m >= n) return dense_topk(s, k, opts);  // Krylov space is the whole space

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}; 0 at block edges
    std::vector<std::size_t> block_starts{0};
    CounterRng rng(0x6b64725f6569670bull);

    auto fresh_direction = [&]() {
      std::vector<double> w(n);
      while (true) {
        for (auto& x : w) x = rng.next_normal();
        for (const auto& v : basis) {
          const double c = dot(w, v);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
        }
        const double nw = norm2(w);
        if (nw > 1e-8) {
          for (auto& x : w) x /= nw;
          return w;
        }
      }
    };

    basis.push_back(fresh_direction());
    while (basis.size() < m) {
      const auto& vj = basis.back();
      std::vector<double> w = matvec(s.entries(), vj);
      const double a = dot(w, vj);
      alpha.push_back(a);
      // two reorthogonalization passes over the full basis
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) {
          const double c = dot(w, v);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
        }
      }
      const double b = norm2(w);
      if (b <= breakdown) {
        beta.push_back(0.0);
        block_starts.push_back(basis.size());
        basis.push_back(fresh_direction());
      } else {
        beta.push_back(b);
        for (auto& x : w) x /= b;
        basis.push_back(std::move(w));
      }
    }
    alpha.push_back(dot(matvec(s.entries(), basis.back()), basis.back()));

    // Ritz pairs per tridiagonal block.
    std::vector<double> ritz_values;
    std::vector<std::vector<double>> ritz_vectors;
    block_starts.push_back(basis.size());
    for (std::size_t bi = 0; bi + 1 < block_starts.size(); ++bi) {
      const std::size_t lo = block_starts[bi], hi = block_starts[bi + 1];
      const std::size_t nb = hi - lo;
      Matrix t(nb, nb);
      for (std::size_t i = 0; i < nb; ++i) {
        t(i, i) = alpha[lo + i];
        if (i + 1 < nb) t(i, i + 1) = t(i + 1, i) = beta[lo + i];
      }
      std::vector<double> td;
      Matrix tv;
      jacobi_eig(t, td, tv, opts.max_jacobi_sweeps);
      for (std::size_t j = 0; j < nb; ++j) {
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < nb; ++i) {
          const double c = tv(i, j);
          const auto& v = basis[lo + i];
          for (std::size_t r = 0; r < n; ++r) y[r] += c * v[r];
        }
        ritz_values.push_back(td[j]);
        ritz_vectors.push_back(std::move(y));
      }
    }

    const auto idx = order_descending(ritz_values);
    if (idx.size() >= k) {
      EigenPairs out;
      out.values.resize(k);
      out.vectors = Matrix(n, k);
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const auto& y = ritz_vectors[idx[j]];
        const double theta = ritz_values[idx[j]];
        std::vector<double> sy = matvec(s.entries(), y);
        double rr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double r = sy[i] - theta * y[i];
          rr += r * r;
        }
        if (std::sqrt(rr) > tol) {
          ok = false;
          break;
        }
        out.values[j] = theta;
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = y[i];
        normalize_column(out.vectors, j);
        canonicalize_column_sign(out.vectors, j);
      }
      if (ok) return out;
    }
    if (m >= opts.lanczos_max_dim)
      raise(ErrorCode::ConvergenceFailure, "Lanczos subspace cap reached");
    m = std::min(n, 2 * m);
  }
}

}  // namespace

SymMatrix::SymMatrix(Matrix m) {
  if (m.rows() != m.cols())
    raise(ErrorCode::NonSymmetric, "matrix is not square");
  double max_abs = 0.0, max_asym = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      max_abs = std::max(max_abs, std::fabs(m(i, j)));
      max_abs = std::max(max_abs, std::fabs(m(j, i)));
      max_asym = std::max(max_asym, std::fabs(m(i, j) - m(j, i)));
    }
  }
  if (max_asym > 1e-10 * max_abs)
    raise(ErrorCode::NonSymmetric, "asymmetry exceeds 1e-10 of max entry");
  entries_ = exact_symmetrize(std::move(m));
}

EigenPairs sym_eig(const SymMatrix& s, std::size_t k, const EigOptions& opts) {
  if (k == 0 || k > s.dim())
    raise(ErrorCode::InvalidArgument, "sym_eig: k out of range");
  EigenPairs pairs = s.dim() <= opts.dense_cutoff ? dense_topk(s, k, opts)
                                                  : lanczos_topk(s, k, opts);
  check_residuals(s, pairs,
                  opts.residual_tol * std::max(1.0, frobenius_norm(s.entries())));
  return pairs;
}

Matrix cholesky(const SymMatrix& s) {
  const std::size_t n = s.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k2 = 0; k2 < j; ++k2) d -= l(j, k2) * l(j, k2);
    if (d <= 0.0)
      raise(ErrorCode::NotPositiveDefinite, "nonpositive pivot at row " + std::to_string(j));
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double sum = s(i, j);
      for (std::size_t k2 = 0; k2 < j; ++k2) sum -= l(i, k2) * l(j, k2);
      l(i, j) = sum / l(j, j);
    }
  }
  return l;
}

void solve_lower(const Matrix& l, std::span<double> x) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * x[j];
    x[i] = s / l(i, i);
  }
}

void solve_lower_transposed(const Matrix& l, std::span<double> x) {
  const std::size_t n = l.rows();
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= l(j, i) * x[j];
    x[i] = s / l(i, i);
  }
}

EigenPairs gen_eig(const SymMatrix& a, const SymMatrix& b, std::size_t k, double ridge,
                   const EigOptions& opts) {
  const std::size_t n = a.dim();
  if (b.dim() != n) raise(ErrorCode::DimensionMismatch, "gen_eig: A and B dims differ");
  if (k == 0 || k > n) raise(ErrorCode::InvalidArgument, "gen_eig: k out of range");
  if (ridge < 0.0) raise(ErrorCode::InvalidArgument, "gen_eig: negative ridge");

  Matrix breg = b.entries();
  for (std::size_t i = 0; i < n; ++i) breg(i, i) += ridge;
  const Matrix l = cholesky(SymMatrix(std::move(breg)));

  // W = L^-1 A L^-T via two triangular solves.
  Matrix w = a.entries();
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = w(i, j);
    solve_lower(l, col);
    for (std::size_t i = 0; i < n; ++i) w(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    solve_lower(l, w.row(i));
  }
  EigenPairs whitened = sym_eig(SymMatrix(exact_symmetrize(std::move(w))), k, opts);

  EigenPairs out;
  out.values = whitened.values;
  out.vectors = Matrix(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = whitened.vectors(i, j);
    solve_lower_transposed(l, col);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = col[i];
    normalize_column(out.vectors, j);
    canonicalize_column_sign(out.vectors, j);
  }

  // Residual against the regularized pencil.
  const double tol = opts.residual_tol * std::max(1.0, frobenius_norm(a.entries()));
  for (std::size_t j = 0; j < k; ++j) {
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0, bv = 0.0;
      for (std::size_t l2 = 0; l2 < n; ++l2) {
        av += a(i, l2) * out.vectors(l2, j);
        bv += b(i, l2) * out.vectors(l2, j);
      }
      bv += ridge * out.vectors(i, j);
      const double r = av - out.values[j] * bv;
      rr += r * r;
    }
    if (std::sqrt(rr) > tol)
      raise(ErrorCode::ConvergenceFailure, "generalized eigenpair residual above tolerance");
  }
  return out;
}

}  // namespace kdr
