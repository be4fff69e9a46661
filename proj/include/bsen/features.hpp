#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bsen/model.hpp"
#include "bsen/rng.hpp"
#include "bsen/volume.hpp"

namespace bsen {

enum class Extractor { ICA, PCA, CAE, BSEN_CDR, BSEN_MMSE, Fusion };
const char* extractor_name(Extractor e);
Extractor parse_extractor(const std::string& s);

struct FeatureVector {
  std::string subject_id;
  Extractor extractor = Extractor::CAE;
  std::vector<double> values;
};

// Encode the prepared (averaged, z-scored, padded) subject volume in
// inference mode and mean-pool the bottleneck across channels:
// one value per bottleneck spatial position.
std::vector<double> extract_feature(BsenModel& model, const Volume3D& prepared);

// --- PCA ----------------------------------------------------------------

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;       // d x k, columns are principal axes
  Eigen::VectorXd explained_var;    // descending
  int dropped_null_components = 0;  // k requested minus usable rank
};

// Mean-centered projection onto the top-k covariance eigenvectors.
// Components with (near-)zero variance are dropped with a warning count.
PcaModel pca_fit(const Eigen::MatrixXd& train_rows, int k);
Eigen::VectorXd pca_transform(const PcaModel& pca, const Eigen::VectorXd& x);

// --- FastICA ------------------------------------------------------------

struct IcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd whitening;  // k x d: projects onto unit-variance PCA space
  Eigen::MatrixXd unmixing;   // k x k, applied after whitening
  bool converged = false;
  int iterations = 0;
};

// FastICA with tanh nonlinearity and symmetric decorrelation, tolerance
// 1e-4, at most 200 iterations, seeded start. On non-convergence the best
// iterate is returned with converged = false.
IcaModel ica_fit(const Eigen::MatrixXd& train_rows, int k, Rng& rng);
Eigen::VectorXd ica_transform(const IcaModel& ica, const Eigen::VectorXd& x);

}  // namespace bsen
