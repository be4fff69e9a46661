#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace bsen::nn {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One Adam step on a single parameter block. t is the 1-based step counter
// after increment (caller increments once per optimizer step, shared across
// blocks).
template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, std::vector<T>& m,
               std::vector<T>& v, std::int64_t t, const AdamHyper& h) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam_step: shape mismatch");
  if (m.size() != params.size()) m.assign(params.size(), T(0));
  if (v.size() != params.size()) v.assign(params.size(), T(0));
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  const std::int64_t n = static_cast<std::int64_t>(params.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double g = static_cast<double>(grads[i]);
    const double mi = h.beta1 * static_cast<double>(m[i]) + (1.0 - h.beta1) * g;
    const double vi = h.beta2 * static_cast<double>(v[i]) + (1.0 - h.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double mhat = mi / c1;
    const double vhat = vi / c2;
    params[i] = static_cast<T>(static_cast<double>(params[i]) - h.lr * mhat / (std::sqrt(vhat) + h.eps));
  }
}

// Optimizer state over a list of parameter blocks (one per trainable layer).
template <typename T>
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamHyper h) : h_(h) {}

  void step(const std::vector<std::span<T>>& params, const std::vector<std::span<T>>& grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("AdamOptimizer: block count mismatch");
    if (m_.empty()) {
      m_.resize(params.size());
      v_.resize(params.size());
      for (std::size_t b = 0; b < params.size(); ++b) {
        m_[b].assign(params[b].size(), T(0));
        v_[b].assign(params[b].size(), T(0));
      }
    }
    ++t_;
    for (std::size_t b = 0; b < params.size(); ++b)
      adam_step<T>(params[b], std::span<const T>(grads[b].data(), grads[b].size()), m_[b], v_[b], t_, h_);
  }

  std::int64_t steps() const { return t_; }
  const AdamHyper& hyper() const { return h_; }

 private:
  AdamHyper h_;
  std::int64_t t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace bsen::nn
