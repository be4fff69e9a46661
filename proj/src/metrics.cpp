#include "bsen/metrics.hpp"

#include "bsen/error.hpp"

namespace bsen {

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j) counts[i][j] += other.counts[i][j];
}

std::int64_t ConfusionMatrix::row_sum(int c) const {
  std::int64_t s = 0;
  for (int j = 0; j < kNumClasses; ++j) s += counts[c][j];
  return s;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (int i = 0; i < kNumClasses; ++i) s += row_sum(i);
  return s;
}

double ConfusionMatrix::recall_percent(int c) const {
  const std::int64_t n = row_sum(c);
  if (n == 0)
    throw DataError(std::string("confusion matrix has no samples of class ") +
                    label_name(static_cast<Label>(c)));
  return 100.0 * static_cast<double>(counts[c][c]) / static_cast<double>(n);
}

double uar_percent(const ConfusionMatrix& cm) {
  double s = 0.0;
  for (int c = 0; c < kNumClasses; ++c) s += cm.recall_percent(c);
  return s / kNumClasses;
}

double uar_from_recalls(std::span<const double> recalls_percent) {
  if (recalls_percent.empty()) throw DataError("uar_from_recalls: empty input");
  double s = 0.0;
  for (double r : recalls_percent) s += r;
  return s / static_cast<double>(recalls_percent.size());
}

}  // namespace bsen
