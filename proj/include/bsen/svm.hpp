#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bsen {

// One-vs-rest linear SVM (L1 hinge loss, L2 regularization) trained by
// deterministic dual coordinate descent with a duality-gap stopping rule,
// plus per-class Platt calibration fit on the training decision values.
// The bias is an augmented constant feature, regularized like any weight.
struct SvmModel {
  int n_classes = 0;
  Eigen::MatrixXd weights;      // (d+1) x n_classes, last row is the bias
  Eigen::VectorXd platt_a;      // per-class sigmoid slope (negative when oriented)
  Eigen::VectorXd platt_b;
  double C = 1.0;
  bool calibrated = false;

  Eigen::VectorXd decision(const Eigen::VectorXd& x) const;
  std::vector<double> predict_proba(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x) const;
};

SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y, int n_classes,
                   double C = 1.0, double gap_tol = 1e-6, int max_epochs = 10000);

// Platt sigmoid fit: returns (A, B) for P(y=+1|f) = 1/(1+exp(A f + B)).
std::pair<double, double> platt_fit(const std::vector<double>& decisions,
                                    const std::vector<int>& labels01);

// Normalized weighted sum of probability vectors.
std::vector<double> late_fuse(const std::vector<std::vector<double>>& probas,
                              const std::vector<double>& weights);

// Per-feature mean/std scaler fit on training rows (std floor 1e-12).
struct Scaler {
  Eigen::VectorXd mean, inv_std;
  static Scaler fit(const Eigen::MatrixXd& rows);
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;
};

}  // namespace bsen
