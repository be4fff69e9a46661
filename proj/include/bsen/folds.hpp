#pragma once

#include <cstdint>
#include <vector>

#include "bsen/manifest.hpp"

namespace bsen {

// Stratified k-fold plan over subject indices; folds are disjoint and
// exhaustive with per-fold class counts within one subject of proportional.
struct FoldPlan {
  int k = 5;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> folds;  // subject indices per fold

  std::vector<int> train_indices(int fold) const;
  const std::vector<int>& test_indices(int fold) const { return folds[fold]; }
};

FoldPlan stratified_folds(const std::vector<Label>& labels, int k, std::uint64_t seed);

// Throws unless every fold contains every class (needed for pooled recall).
void require_all_classes_per_fold(const FoldPlan& plan, const std::vector<Label>& labels);

}  // namespace bsen
