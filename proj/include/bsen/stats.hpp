#pragma once

#include <span>
#include <vector>

namespace bsen {

// Regularized incomplete beta I_x(a,b) by Lentz continued fraction,
// absolute accuracy ~1e-14.
double incomplete_beta(double a, double b, double x);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
  bool degenerate = false;  // zero pooled variance with equal means
};

// Two-sample pooled-variance Student's t-test, two-sided p from
// p = I_{df/(df+t^2)}(df/2, 1/2). Throws if either group has < 2 samples or
// if the pooled variance is zero with unequal means.
TTestResult two_sided_t_test(std::span<const double> group_a, std::span<const double> group_b);

enum class FweMethod { None, Bonferroni, Holm };
const char* fwe_name(FweMethod m);

// Order-preserving corrected p-values; never decreases and never exceeds 1.
std::vector<double> fwe_correct(std::span<const double> p_values, FweMethod method);

}  // namespace bsen
