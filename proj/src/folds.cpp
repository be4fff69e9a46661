#include "bsen/folds.hpp"

#include <algorithm>

#include "bsen/error.hpp"
#include "bsen/rng.hpp"

namespace bsen {

std::vector<int> FoldPlan::train_indices(int fold) const {
  std::vector<int> out;
  for (int f = 0; f < k; ++f)
    if (f != fold) out.insert(out.end(), folds[f].begin(), folds[f].end());
  std::sort(out.begin(), out.end());
  return out;
}

FoldPlan stratified_folds(const std::vector<Label>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("stratified_folds: need k >= 2");
  if (static_cast<int>(labels.size()) < k)
    throw DataError("stratified_folds: fewer subjects than folds");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.assign(k, {});

  Rng rng = Rng::stream(seed, "cv.split");
  // Deal each class's shuffled members onto a cursor that runs on across
  // classes, which balances both class counts and fold sizes.
  int cursor = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (static_cast<int>(labels[i]) == c) members.push_back(static_cast<int>(i));
    rng.shuffle(members);
    for (int idx : members) {
      plan.folds[cursor % k].push_back(idx);
      ++cursor;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

void require_all_classes_per_fold(const FoldPlan& plan, const std::vector<Label>& labels) {
  for (int f = 0; f < plan.k; ++f) {
    std::array<int, kNumClasses> count{};
    for (int idx : plan.folds[f]) count[static_cast<int>(labels[idx])]++;
    for (int c = 0; c < kNumClasses; ++c)
      if (count[c] == 0)
        throw DataError("fold " + std::to_string(f) + " has no subjects of class " +
                        label_name(static_cast<Label>(c)) +
                        "; re-stratify with another seed or fewer folds");
  }
}

}  // namespace bsen
