#include "bsen/features.hpp"

#include <cmath>
#include <iostream>

#include "bsen/error.hpp"

namespace bsen {

const char* extractor_name(Extractor e) {
  switch (e) {
    case Extractor::ICA: return "ica";
    case Extractor::PCA: return "pca";
    case Extractor::CAE: return "cae";
    case Extractor::BSEN_CDR: return "bsen_cdr";
    case Extractor::BSEN_MMSE: return "bsen_mmse";
    case Extractor::Fusion: return "fusion";
  }
  return "?";
}

Extractor parse_extractor(const std::string& s) {
  for (Extractor e : {Extractor::ICA, Extractor::PCA, Extractor::CAE, Extractor::BSEN_CDR,
                      Extractor::BSEN_MMSE, Extractor::Fusion})
    if (s == extractor_name(e)) return e;
  throw DataError("unknown extractor '" + s + "'");
}

std::vector<double> extract_feature(BsenModel& model, const Volume3D& prepared) {
  const Dims3 in = model.cfg.input_dims;
  if (!(prepared.dims == in))
    throw DataError("extract_feature: volume is " + to_string(prepared.dims) +
                    " but the checkpoint expects " + to_string(in));
  nn::Tensor5<float> x(1, 1, in.nx, in.ny, in.nz);
  std::copy(prepared.data.begin(), prepared.data.end(), x.data.begin());
  const auto& z = model.encode(x, false);
  const std::size_t sp = z.spatial();
  std::vector<double> pooled(sp, 0.0);
  for (int c = 0; c < z.c; ++c) {
    const float* p = z.channel(0, c);
    for (std::size_t i = 0; i < sp; ++i) pooled[i] += p[i];
  }
  const double inv = 1.0 / z.c;
  for (auto& v : pooled) v *= inv;
  return pooled;
}

PcaModel pca_fit(const Eigen::MatrixXd& train_rows, int k) {
  const Eigen::Index n = train_rows.rows();
  const Eigen::Index d = train_rows.cols();
  if (n < 2) throw DataError("pca_fit: need at least 2 samples");
  if (k < 1 || k > std::min(n, d))
    throw DataError("pca_fit: k = " + std::to_string(k) + " exceeds min(samples, dims) = " +
                    std::to_string(std::min(n, d)));
  PcaModel m;
  m.mean = train_rows.colwise().mean();
  Eigen::MatrixXd centered = train_rows.rowwise() - m.mean.transpose();
  // Thin SVD: right singular vectors are the covariance eigenvectors.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<int> keep;
  const double tol = 1e-12 * std::max<double>(sv.size() ? sv(0) : 0.0, 1.0);
  for (int i = 0; i < k; ++i) {
    if (i < sv.size() && sv(i) > tol) keep.push_back(i);
  }
  m.dropped_null_components = k - static_cast<int>(keep.size());
  if (m.dropped_null_components > 0)
    std::cerr << "[pca] warning: dropped " << m.dropped_null_components
              << " null component(s) (rank-deficient data)\n";
  m.components.resize(d, static_cast<Eigen::Index>(keep.size()));
  m.explained_var.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    Eigen::VectorXd col = svd.matrixV().col(keep[i]);
    // Deterministic sign: largest-magnitude coefficient is positive.
    Eigen::Index imax;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0) col = -col;
    m.components.col(static_cast<Eigen::Index>(i)) = col;
    m.explained_var(static_cast<Eigen::Index>(i)) =
        sv(keep[i]) * sv(keep[i]) / static_cast<double>(n - 1);
  }
  return m;
}

Eigen::VectorXd pca_transform(const PcaModel& pca, const Eigen::VectorXd& x) {
  if (x.size() != pca.mean.size()) throw DataError("pca_transform: dimension mismatch");
  return pca.components.transpose() * (x - pca.mean);
}

namespace {

// W <- (W W^T)^{-1/2} W via the symmetric eigendecomposition.
Eigen::MatrixXd sym_decorrelate(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w * w.transpose());
  Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-18).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * w;
}

}  // namespace

IcaModel ica_fit(const Eigen::MatrixXd& train_rows, int k, Rng& rng) {
  const Eigen::Index n = train_rows.rows();
  if (n < 2) throw DataError("ica_fit: need at least 2 samples");
  PcaModel pca = pca_fit(train_rows, k);
  if (static_cast<int>(pca.components.cols()) < k)
    throw DataError("ica_fit: k = " + std::to_string(k) + " exceeds the data rank");

  IcaModel m;
  m.mean = pca.mean;
  // Whiten: project onto components and scale to unit variance.
  Eigen::VectorXd scale = pca.explained_var.cwiseMax(1e-18).cwiseSqrt().cwiseInverse();
  m.whitening = scale.asDiagonal() * pca.components.transpose();

  // Whitened data, samples as columns.
  Eigen::MatrixXd xw(k, n);
  for (Eigen::Index i = 0; i < n; ++i)
    xw.col(i) = m.whitening * (train_rows.row(i).transpose() - m.mean);

  Eigen::MatrixXd w(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) w(i, j) = rng.normal();
  w = sym_decorrelate(w);

  const double tol = 1e-4;
  const int max_iter = 200;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (m.iterations = 1; m.iterations <= max_iter; ++m.iterations) {
    Eigen::MatrixXd wx = w * xw;                      // k x n
    Eigen::MatrixXd g = wx.array().tanh().matrix();   // tanh nonlinearity
    Eigen::VectorXd g_prime_mean =
        (1.0 - g.array().square()).rowwise().mean().matrix();
    Eigen::MatrixXd w_new =
        (g * xw.transpose()) * inv_n - g_prime_mean.asDiagonal() * w;
    w_new = sym_decorrelate(w_new);
    const double lim =
        ((w_new * w.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
    w = w_new;
    if (lim < tol) {
      m.converged = true;
      break;
    }
  }
  if (!m.converged)
    std::cerr << "[ica] warning: FastICA did not converge in " << max_iter
              << " iterations; returning best iterate\n";
  m.unmixing = w;
  return m;
}

Eigen::VectorXd ica_transform(const IcaModel& ica, const Eigen::VectorXd& x) {
  if (x.size() != ica.mean.size()) throw DataError("ica_transform: dimension mismatch");
  return ica.unmixing * (ica.whitening * (x - ica.mean));
}

}  // namespace bsen
