#include "bsen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bsen/error.hpp"

namespace bsen {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw DataError("incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

TTestResult two_sided_t_test(std::span<const double> group_a, std::span<const double> group_b) {
  const std::size_t na = group_a.size(), nb = group_b.size();
  if (na < 2 || nb < 2) throw DataError("t-test: each group needs at least 2 samples");
  const double ma = std::accumulate(group_a.begin(), group_a.end(), 0.0) / static_cast<double>(na);
  const double mb = std::accumulate(group_b.begin(), group_b.end(), 0.0) / static_cast<double>(nb);
  double ssa = 0.0, ssb = 0.0;
  for (double v : group_a) ssa += (v - ma) * (v - ma);
  for (double v : group_b) ssb += (v - mb) * (v - mb);
  TTestResult r;
  r.df = static_cast<double>(na + nb - 2);
  const double pooled = (ssa + ssb) / r.df;
  if (pooled <= 0.0) {
    if (ma == mb) {
      r.degenerate = true;
      r.t = 0.0;
      r.p = 1.0;
      return r;
    }
    throw DataError("t-test: zero pooled variance with unequal means");
  }
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  r.t = (ma - mb) / se;
  r.p = incomplete_beta(r.df / 2.0, 0.5, r.df / (r.df + r.t * r.t));
  return r;
}

const char* fwe_name(FweMethod m) {
  switch (m) {
    case FweMethod::None: return "none";
    case FweMethod::Bonferroni: return "bonferroni";
    case FweMethod::Holm: return "holm";
  }
  return "?";
}

std::vector<double> fwe_correct(std::span<const double> p_values, FweMethod method) {
  const std::size_t n = p_values.size();
  for (double p : p_values)
    if (p < 0.0 || p > 1.0) throw DataError("fwe_correct: p-values must be in [0,1]");
  std::vector<double> out(p_values.begin(), p_values.end());
  if (n == 0 || method == FweMethod::None) return out;
  if (method == FweMethod::Bonferroni) {
    for (auto& p : out) p = std::min(1.0, p * static_cast<double>(n));
    return out;
  }
  // Holm step-down: sort ascending, adjusted_(i) = max_{j<=i} min(1, (n-j)*p_(j)).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  double running = 0.0;
  for (std::size_t rank = 0; rank < n; ++rank) {
    const double adj = std::min(1.0, static_cast<double>(n - rank) * p_values[order[rank]]);
    running = std::max(running, adj);
    out[order[rank]] = running;
  }
  return out;
}

}  // namespace bsen
