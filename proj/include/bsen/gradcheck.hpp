#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bsen/layers.hpp"
#include "bsen/rng.hpp"
#include "bsen/tensor.hpp"

namespace bsen::nn {

// Scalar loss on the stack output: returns the loss value and fills the
// gradient tensor with d(loss)/d(output).
using LossFn =
    std::function<double(const Tensor5<double>& out, Tensor5<double>* grad)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  int checked = 0;
};

inline double rel_error(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-10});
  return std::abs(a - b) / denom;
}

// Central finite differences (h = 1e-5) against analytic gradients over a
// random subset of parameters and input coordinates. Double precision only;
// runs the stack in training mode.
inline GradCheckResult gradient_check(Stack<double>& stack, const Tensor5<double>& input,
                                      const LossFn& loss, Rng& rng,
                                      int samples_per_block = 10, double h = 1e-5) {
  Tensor5<double> gtop;

  auto eval = [&](const Tensor5<double>& x, Tensor5<double>* g) {
    const Tensor5<double>& out = stack.forward(x, true);
    return loss(out, g);
  };

  // Analytic pass.
  eval(input, &gtop);
  const Tensor5<double>& ginput = stack.backward(gtop);
  std::vector<Tensor5<double>> saved_gin{ginput};
  std::vector<std::vector<double>> saved_grads;
  for (auto g : stack.grad_blocks()) saved_grads.emplace_back(g.begin(), g.end());

  GradCheckResult res;
  auto probe = [&](double* slot, double analytic) {
    const double orig = *slot;
    *slot = orig + h;
    const double lp = eval(input, nullptr);
    *slot = orig - h;
    const double lm = eval(input, nullptr);
    *slot = orig;
    const double fd = (lp - lm) / (2.0 * h);
    res.max_rel_error = std::max(res.max_rel_error, rel_error(analytic, fd));
    ++res.checked;
  };

  auto blocks = stack.param_blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int s = 0; s < samples_per_block; ++s) {
      const std::size_t i = static_cast<std::size_t>(rng.uniform_int(blocks[b].size()));
      probe(&blocks[b][i], saved_grads[b][i]);
    }
  }
  // Input gradient via a const_cast-free copy: perturb a scratch input.
  Tensor5<double> scratch = input;
  auto eval_scratch = [&](Tensor5<double>* g) { return eval(scratch, g); };
  for (int s = 0; s < samples_per_block; ++s) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform_int(scratch.size()));
    const double orig = scratch.data[i];
    scratch.data[i] = orig + h;
    const double lp = eval_scratch(nullptr);
    scratch.data[i] = orig - h;
    const double lm = eval_scratch(nullptr);
    scratch.data[i] = orig;
    const double fd = (lp - lm) / (2.0 * h);
    res.max_rel_error = std::max(res.max_rel_error, rel_error(saved_gin[0].data[i], fd));
    ++res.checked;
  }
  return res;
}

}  // namespace bsen::nn
