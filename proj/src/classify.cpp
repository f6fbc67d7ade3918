#include "kdr/classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kdr/rng.hpp"

namespace kdr {
namespace {

std::pair<int, int> binary_labels(std::span<const int> y) {
  std::set<int> distinct(y.begin(), y.end());
  if (distinct.size() < 2) raise(ErrorCode::SingleClass, "only one class present");
  if (distinct.size() > 2)
    raise(ErrorCode::InvalidArgument, "binary classifier got more than 2 labels");
  auto it = distinct.begin();
  const int neg = *it++;
  return {neg, *it};
}

double stable_sigmoid(double z) {
  // 1 / (1 + exp(z)) without overflow on either side
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

LinearSvmModel svm_fit(const Matrix& x, std::span<const int> y, double cost,
                       const SvmOptions& opts) {
  const std::size_t n = x.rows(), d = x.cols();
  if (y.size() != n) raise(ErrorCode::SizeMismatch, "svm_fit: label count differs");
  if (n < 2) raise(ErrorCode::DegenerateSample, "svm_fit needs at least 2 samples");
  if (cost <= 0.0) raise(ErrorCode::InvalidArgument, "svm_fit: cost must be positive");
  const auto [neg, pos] = binary_labels(y);

  std::vector<double> sign(n);
  for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] == pos ? 1.0 : -1.0;

  // Dual coordinate descent on the bias-augmented problem: Q_ii = |x_i|^2 + 1,
  // w_aug tracks sum alpha_i y_i [x_i; 1].
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = dot(x.row(i), x.row(i)) + 1.0;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  // projected-gradient magnitude of coordinate i under the current (w, b)
  auto violation = [&](std::size_t i) {
    const double g = sign[i] * (dot(w, x.row(i)) + b) - 1.0;
    if (alpha[i] <= 0.0) return std::fabs(std::min(g, 0.0));
    if (alpha[i] >= cost) return std::fabs(std::max(g, 0.0));
    return std::fabs(g);
  };

  std::size_t updates = 0;
  bool converged = false;
  for (std::uint64_t epoch = 0; !converged; ++epoch) {
    CounterRng rng(opts.seed, epoch);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.next_below(i)]);

    for (std::size_t oi = 0; oi < n; ++oi) {
      const std::size_t i = order[oi];
      const double g = sign[i] * (dot(w, x.row(i)) + b) - 1.0;
      double pg = g;
      if (alpha[i] <= 0.0)
        pg = std::min(g, 0.0);
      else if (alpha[i] >= cost)
        pg = std::max(g, 0.0);
      if (pg != 0.0) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / qii[i], 0.0, cost);
        const double delta = (alpha[i] - old) * sign[i];
        if (delta != 0.0) {
          for (std::size_t f = 0; f < d; ++f) w[f] += delta * x(i, f);
          b += delta;
        }
      }
      ++updates;
    }

    // Rebuild (w, b) from the duals so the incremental updates cannot drift
    // away from the stored alphas, then certify on a clean full pass: the
    // stored-dual KKT violations are <= tol exactly when we stop.
    std::fill(w.begin(), w.end(), 0.0);
    b = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (alpha[i] != 0.0) {
        const double coef = alpha[i] * sign[i];
        for (std::size_t f = 0; f < d; ++f) w[f] += coef * x(i, f);
        b += coef;
      }
    double max_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_v = std::max(max_v, violation(i));
    converged = max_v <= opts.tol;
    if (!converged && updates >= opts.max_updates)
      raise(ErrorCode::NonConvergence, "svm_fit: update cap reached before tolerance");
  }

  LinearSvmModel m;
  m.w = std::move(w);
  m.b = b;
  m.cost = cost;
  m.label_neg = neg;
  m.label_pos = pos;
  m.alphas = std::move(alpha);
  return m;
}

std::vector<double> svm_decision(const LinearSvmModel& m, const Matrix& x) {
  if (x.cols() != m.w.size())
    raise(ErrorCode::DimensionMismatch, "svm_decision: feature count differs");
  std::vector<double> f(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) f[i] = dot(m.w, x.row(i)) + m.b;
  return f;
}

std::vector<int> svm_predict(const LinearSvmModel& m, const Matrix& x) {
  const std::vector<double> f = svm_decision(m, x);
  std::vector<int> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = f[i] >= 0.0 ? m.label_pos : m.label_neg;  // sign(0) -> +1
  return out;
}

LinearSvmModel platt_fit(const LinearSvmModel& m, const Matrix& x, std::span<const int> y) {
  if (y.size() != x.rows()) raise(ErrorCode::SizeMismatch, "platt_fit: label count differs");
  const std::vector<double> f = svm_decision(m, x);
  std::size_t prior1 = 0, prior0 = 0;
  for (int label : y) {
    if (label == m.label_pos)
      ++prior1;
    else if (label == m.label_neg)
      ++prior0;
    else
      raise(ErrorCode::InvalidArgument, "platt_fit: label outside the model's pair");
  }
  if (prior1 == 0 || prior0 == 0)
    raise(ErrorCode::SingleClass, "platt_fit needs both classes");

  const double hi_target = (double(prior1) + 1.0) / (double(prior1) + 2.0);
  const double lo_target = 1.0 / (double(prior0) + 2.0);
  const std::size_t n = f.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = y[i] == m.label_pos ? hi_target : lo_target;

  auto nll = [&](double a, double b2) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = f[i] * a + b2;
      if (z >= 0.0)
        v += t[i] * z + std::log1p(std::exp(-z));
      else
        v += (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return v;
  };

  double a = 0.0;
  double b2 = std::log((double(prior0) + 1.0) / (double(prior1) + 1.0));
  double fval = nll(a, b2);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = f[i] * a + b2;
      const double p = stable_sigmoid(z);          // P(positive)
      const double q = 1.0 - p;
      const double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      const double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::max(std::fabs(g1), std::fabs(g2)) <= 1e-8) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= 1e-10) {
      const double na = a + step * da, nb = b2 + step * db;
      const double nf = nll(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b2 = nb;
        fval = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < 1e-10) break;  // line search exhausted; accept current point
  }

  LinearSvmModel out = m;
  out.platt_a = a;
  out.platt_b = b2;
  return out;
}

std::vector<double> svm_probability(const LinearSvmModel& m, const Matrix& x) {
  if (!m.platt_a || !m.platt_b)
    raise(ErrorCode::InvalidArgument, "svm_probability: model has no sigmoid fitted");
  const std::vector<double> f = svm_decision(m, x);
  std::vector<double> p(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    p[i] = stable_sigmoid(*m.platt_a * f[i] + *m.platt_b);
  return p;
}

EvalReport evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    const std::vector<double>* scores) {
  if (y_true.size() != y_pred.size())
    raise(ErrorCode::LengthMismatch, "evaluate: prediction count differs");
  if (scores && scores->size() != y_true.size())
    raise(ErrorCode::LengthMismatch, "evaluate: score count differs");
  if (y_true.empty()) raise(ErrorCode::LengthMismatch, "evaluate: empty input");

  std::set<int> distinct(y_true.begin(), y_true.end());
  distinct.insert(y_pred.begin(), y_pred.end());
  if (distinct.size() > 2)
    raise(ErrorCode::InvalidArgument, "evaluate handles binary labels only");
  const int pos = *distinct.rbegin();

  EvalReport r;
  r.positive_label = pos;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool tp_row = y_true[i] == pos;
    const bool pp = y_pred[i] == pos;
    if (tp_row && pp) ++r.confusion[0][0];
    if (tp_row && !pp) ++r.confusion[0][1];
    if (!tp_row && pp) ++r.confusion[1][0];
    if (!tp_row && !pp) ++r.confusion[1][1];
  }
  const auto tp = r.confusion[0][0], fn = r.confusion[0][1];
  const auto fp = r.confusion[1][0], tn = r.confusion[1][1];
  r.accuracy = double(tp + tn) / double(y_true.size());
  if (tp + fn > 0) r.tpr = double(tp) / double(tp + fn);
  if (tn + fp > 0) r.tnr = double(tn) / double(tn + fp);

  if (scores && tp + fn > 0 && tn + fp > 0) {
    const std::size_t n = y_true.size();
    const double np = double(tp + fn), nn = double(tn + fp);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return (*scores)[a] > (*scores)[b];
    });
    r.roc_points.push_back({0.0, 0.0});
    double auc = 0.0;
    std::int64_t ctp = 0, cfp = 0;
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;  // group tied scores into one threshold step
      while (j + 1 < n && (*scores)[idx[j + 1]] == (*scores)[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) {
        if (y_true[idx[k]] == pos)
          ++ctp;
        else
          ++cfp;
      }
      const auto& prev = r.roc_points.back();
      const std::pair<double, double> pt{double(cfp) / nn, double(ctp) / np};
      auc += 0.5 * (pt.first - prev.first) * (pt.second + prev.second);
      r.roc_points.push_back(pt);
      i = j + 1;
    }
    r.auc = auc;
  }
  return r;
}

}  // namespace kdr
