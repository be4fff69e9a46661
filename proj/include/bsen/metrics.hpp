#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "bsen/manifest.hpp"

namespace bsen {

// Rows = true class (HC, MCI, AD), columns = predicted.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

  void add(Label truth, Label predicted, std::int64_t n = 1) {
    counts[static_cast<int>(truth)][static_cast<int>(predicted)] += n;
  }
  void merge(const ConfusionMatrix& other);
  std::int64_t row_sum(int c) const;
  std::int64_t total() const;
  double recall_percent(int c) const;  // throws on an empty class row
};

// Unweighted average recall in percent: mean of the per-class recalls.
double uar_percent(const ConfusionMatrix& cm);
double uar_from_recalls(std::span<const double> recalls_percent);

}  // namespace bsen
