#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bsen/behavior.hpp"
#include "bsen/tensor.hpp"

namespace bsen {

// The m = 2 contrastive cluster centers for one psychological test, each of
// the bottleneck's flattened dimension.
template <typename T>
struct CenterBankT {
  std::vector<std::vector<T>> centers;          // [kNumClusters][dim]
  std::vector<std::int64_t> update_count;       // EMA updates applied per center

  bool initialized() const { return !centers.empty(); }
  std::size_t dim() const { return centers.empty() ? 0 : centers[0].size(); }

  static CenterBankT zeros(std::size_t dim) {
    CenterBankT b;
    b.centers.assign(kNumClusters, std::vector<T>(dim, T(0)));
    b.update_count.assign(kNumClusters, 0);
    return b;
  }
};

using CenterBank = CenterBankT<float>;

// Mean over samples of the per-sample squared L2 norm of the residual
// (the norm sums over every voxel of a sample; no division by voxel count).
// If grad is non-null it receives d(loss)/d(recon) = (2/N)(recon - target).
template <typename T>
double reconstruction_loss(const nn::Tensor5<T>& recon, const nn::Tensor5<T>& target,
                           nn::Tensor5<T>* grad = nullptr) {
  if (!recon.same_shape(target)) throw std::invalid_argument("reconstruction_loss: shape mismatch");
  if (recon.n < 1) throw std::invalid_argument("reconstruction_loss: empty batch");
  const int n = recon.n;
  const std::size_t per = recon.sample_size();
  if (grad) grad->resize(recon.n, recon.c, recon.nx, recon.ny, recon.nz);
  std::vector<double> per_sample(n, 0.0);
  const double scale = 2.0 / n;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < n; ++b) {
    const T* x = recon.sample(b);
    const T* y = target.sample(b);
    double s = 0.0;
    if (grad) {
      T* g = grad->sample(b);
      for (std::size_t i = 0; i < per; ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        s += d * d;
        g[i] = static_cast<T>(scale * d);
      }
    } else {
      for (std::size_t i = 0; i < per; ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        s += d * d;
      }
    }
    per_sample[b] = s;
  }
  double total = 0.0;
  for (double s : per_sample) total += s;
  return total / n;
}

// Contrastive center loss over a batch of flattened latents:
//   L_C = 1/2 * sum_i ||x_i - c_{e_i}||^2 / (sum_{j != e_i} ||x_i - c_j||^2 + delta)
// Gradients flow to the latents only; centers are maintained by EMA.
template <typename T>
double contrastive_loss(const nn::Tensor5<T>& latent, const CenterBankT<T>& bank,
                        std::span<const int> assign, double delta,
                        nn::Tensor5<T>* grad = nullptr) {
  if (!bank.initialized()) throw std::invalid_argument("contrastive_loss: centers not initialized");
  if (assign.size() != static_cast<std::size_t>(latent.n))
    throw std::invalid_argument("contrastive_loss: one cluster assignment per sample required");
  const std::size_t dim = latent.sample_size();
  if (bank.dim() != dim) throw std::invalid_argument("contrastive_loss: center dimension mismatch");
  if (grad) {
    grad->resize(latent.n, latent.c, latent.nx, latent.ny, latent.nz);
    grad->fill(T(0));
  }
  for (int b = 0; b < latent.n; ++b)
    if (assign[b] < 0 || assign[b] >= kNumClusters)
      throw std::invalid_argument("contrastive_loss: bad cluster id");
  std::vector<double> per_sample(latent.n, 0.0);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < latent.n; ++b) {
    const int own = assign[b];
    const T* x = latent.sample(b);
    double num = 0.0;   // ||x - c_own||^2
    double others = 0.0;
    for (int j = 0; j < kNumClusters; ++j) {
      const T* c = bank.centers[j].data();
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(c[i]);
        s += d * d;
      }
      if (j == own)
        num = s;
      else
        others += s;
    }
    const double den = others + delta;
    per_sample[b] = 0.5 * num / den;
    if (grad) {
      T* g = grad->sample(b);
      const T* cown = bank.centers[own].data();
      const double k = num / (den * den);
      for (std::size_t i = 0; i < dim; ++i)
        g[i] = static_cast<T>((static_cast<double>(x[i]) - static_cast<double>(cown[i])) / den);
      for (int j = 0; j < kNumClusters; ++j) {
        if (j == own) continue;
        const T* c = bank.centers[j].data();
        for (std::size_t i = 0; i < dim; ++i)
          g[i] -= static_cast<T>(k * (static_cast<double>(x[i]) - static_cast<double>(c[i])));
      }
    }
  }
  double total = 0.0;
  for (double s : per_sample) total += s;
  return total;
}

inline double total_loss(double l_rec, double l_c, double alpha) {
  if (alpha < 0) throw std::invalid_argument("total_loss: alpha must be >= 0");
  return l_rec + alpha * l_c;
}

// EMA toward the batch cluster means: c_j <- (1-momentum) c_j + momentum mean.
// Clusters absent from the batch are untouched.
template <typename T>
void update_centers(const nn::Tensor5<T>& latent, std::span<const int> assign,
                    CenterBankT<T>& bank, double momentum = 0.5) {
  if (!bank.initialized()) throw std::invalid_argument("update_centers: centers not initialized");
  const std::size_t dim = latent.sample_size();
  if (bank.dim() != dim) throw std::invalid_argument("update_centers: center dimension mismatch");
  for (int j = 0; j < kNumClusters; ++j) {
    int count = 0;
    for (int b = 0; b < latent.n; ++b)
      if (assign[b] == j) ++count;
    if (count == 0) continue;
    std::vector<double> mean(dim, 0.0);
    for (int b = 0; b < latent.n; ++b) {
      if (assign[b] != j) continue;
      const T* x = latent.sample(b);
      for (std::size_t i = 0; i < dim; ++i) mean[i] += static_cast<double>(x[i]);
    }
    const double inv = 1.0 / count;
    auto& c = bank.centers[j];
    for (std::size_t i = 0; i < dim; ++i)
      c[i] = static_cast<T>((1.0 - momentum) * static_cast<double>(c[i]) + momentum * mean[i] * inv);
    bank.update_count[j]++;
  }
}

}  // namespace bsen
