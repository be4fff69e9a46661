#include "bsen/svm.hpp"

#include <algorithm>
#include <cmath>

#include "bsen/error.hpp"

namespace bsen {

namespace {

// Dual coordinate descent for one binary L1-loss SVM:
//   min_a 0.5 a^T Q a - e^T a,  0 <= a_i <= C,  Q_ij = y_i y_j x_i.x_j
// Cyclic sweeps keep the solver deterministic; the duality gap
//   P(w) - D(a) = 0.5|w|^2 + C sum max(0, 1 - y_i w.x_i) - (sum a - 0.5|w|^2)
// is evaluated once per sweep.
Eigen::VectorXd solve_binary(const Eigen::MatrixXd& Xa, const Eigen::VectorXd& y, double C,
                             double gap_tol, int max_epochs) {
  const Eigen::Index n = Xa.rows();
  const Eigen::Index d = Xa.cols();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd qd(n);
  for (Eigen::Index i = 0; i < n; ++i) qd(i) = Xa.row(i).squaredNorm();

  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = y(i) * Xa.row(i).dot(w) - 1.0;
      double pg = g;
      if (alpha(i) <= 0.0 && g >= 0.0) pg = 0.0;
      if (alpha(i) >= C && g <= 0.0) pg = 0.0;
      if (std::abs(pg) > 1e-12) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - g / qd(i), 0.0, C);
        w += (alpha(i) - old) * y(i) * Xa.row(i).transpose();
      }
    }
    const double wn = 0.5 * w.squaredNorm();
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      hinge += std::max(0.0, 1.0 - y(i) * Xa.row(i).dot(w));
    const double primal = wn + C * hinge;
    const double dual = alpha.sum() - wn;
    if (primal - dual < gap_tol) break;
  }
  return w;
}

double sigmoid_platt(double a, double b, double f) {
  const double z = a * f + b;
  if (z >= 0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

std::pair<double, double> platt_fit(const std::vector<double>& decisions,
                                    const std::vector<int>& labels01) {
  // Newton method with backtracking (Lin, Weng & Keerthi's robust variant),
  // prior-smoothed targets.
  const std::size_t n = decisions.size();
  if (n == 0 || labels01.size() != n) throw DataError("platt_fit: bad inputs");
  double prior1 = 0, prior0 = 0;
  for (int t : labels01) (t > 0 ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = labels01[i] > 0 ? hi : lo;

  double a = 0.0, b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto objective = [&](double A, double B) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = A * decisions[i] + B;
      if (z >= 0)
        obj += t[i] * z + std::log1p(std::exp(-z));
      else
        obj += (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return obj;
  };

  const int max_iter = 100;
  const double min_step = 1e-10, sigma = 1e-12, eps = 1e-5;
  double fval = objective(a, b);
  for (int it = 0; it < max_iter; ++it) {
    double h11 = sigma, h22 = sigma, h21 = 0, g1 = 0, g2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid_platt(a, b, decisions[i]);  // P(y=1)
      const double q = 1.0 - p;
      const double d1 = p - t[i];
      const double d2 = p * q;
      g1 += decisions[i] * d1;
      g2 += d1;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
    }
    if (std::abs(g1) < eps && std::abs(g2) < eps) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    bool moved = false;
    while (step >= min_step) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na; b = nb; fval = nf;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {a, b};
}

SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                   double C, double gap_tol, int max_epochs) {
  const Eigen::Index n = X.rows();
  if (static_cast<Eigen::Index>(y.size()) != n) throw DataError("svm_train: label count mismatch");
  std::vector<int> present(n_classes, 0);
  for (int v : y) {
    if (v < 0 || v >= n_classes) throw DataError("svm_train: label out of range");
    present[v] = 1;
  }
  int distinct = 0;
  for (int p : present) distinct += p;
  if (distinct < 2) throw DataError("svm_train: need at least 2 classes in the training set");

  Eigen::MatrixXd Xa(n, X.cols() + 1);
  Xa.leftCols(X.cols()) = X;
  Xa.col(X.cols()).setOnes();

  SvmModel m;
  m.n_classes = n_classes;
  m.C = C;
  m.weights.resize(Xa.cols(), n_classes);
  m.platt_a.resize(n_classes);
  m.platt_b.resize(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    Eigen::VectorXd yb(n);
    std::vector<int> t01(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      yb(i) = y[i] == c ? 1.0 : -1.0;
      t01[i] = y[i] == c ? 1 : 0;
    }
    m.weights.col(c) = solve_binary(Xa, yb, C, gap_tol, max_epochs);
    std::vector<double> dec(n);
    for (Eigen::Index i = 0; i < n; ++i) dec[i] = Xa.row(i).dot(m.weights.col(c));
    std::tie(m.platt_a(c), m.platt_b(c)) = platt_fit(dec, t01);
  }
  m.calibrated = true;
  return m;
}

Eigen::VectorXd SvmModel::decision(const Eigen::VectorXd& x) const {
  if (x.size() + 1 != weights.rows()) throw DataError("svm decision: dimension mismatch");
  Eigen::VectorXd xa(weights.rows());
  xa.head(x.size()) = x;
  xa(x.size()) = 1.0;
  return weights.transpose() * xa;
}

std::vector<double> SvmModel::predict_proba(const Eigen::VectorXd& x) const {
  if (!calibrated) throw DataError("svm predict_proba: model is not calibrated");
  const Eigen::VectorXd f = decision(x);
  std::vector<double> p(n_classes);
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    p[c] = sigmoid_platt(platt_a(c), platt_b(c), f(c));
    sum += p[c];
  }
  if (sum <= 0) {
    std::fill(p.begin(), p.end(), 1.0 / n_classes);
    return p;
  }
  for (auto& v : p) v /= sum;
  return p;
}

int SvmModel::predict(const Eigen::VectorXd& x) const {
  const auto p = predict_proba(x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<double> late_fuse(const std::vector<std::vector<double>>& probas,
                              const std::vector<double>& weights) {
  if (probas.empty()) throw DataError("late_fuse: empty probability list");
  if (weights.size() != probas.size()) throw DataError("late_fuse: weight count mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0) throw DataError("late_fuse: weights must be >= 0");
    wsum += w;
  }
  if (wsum <= 0) throw DataError("late_fuse: weights must not all be zero");
  const std::size_t k = probas.front().size();
  std::vector<double> out(k, 0.0);
  for (std::size_t m = 0; m < probas.size(); ++m) {
    if (probas[m].size() != k) throw DataError("late_fuse: probability length mismatch");
    for (std::size_t c = 0; c < k; ++c) out[c] += weights[m] * probas[m][c];
  }
  double total = 0.0;
  for (double v : out) total += v;
  for (auto& v : out) v /= total;
  return out;
}

Scaler Scaler::fit(const Eigen::MatrixXd& rows) {
  Scaler s;
  s.mean = rows.colwise().mean();
  Eigen::VectorXd var = (rows.rowwise() - s.mean.transpose()).array().square().colwise().mean();
  s.inv_std = (var.array().sqrt().max(1e-12)).inverse();
  return s;
}

Eigen::VectorXd Scaler::apply(const Eigen::VectorXd& x) const {
  return (x - mean).cwiseProduct(inv_std);
}

Eigen::MatrixXd Scaler::apply_rows(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out = rows.rowwise() - mean.transpose();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    out.row(i) = out.row(i).cwiseProduct(inv_std.transpose());
  return out;
}

}  // namespace bsen
