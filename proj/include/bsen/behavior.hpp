#pragma once

#include <string>

namespace bsen {

enum class BehaviorTest { CDR, MMSE, None };

const char* behavior_name(BehaviorTest t);           // "CDR" | "MMSE" | "none"
BehaviorTest parse_behavior(const std::string& s);   // case-insensitive

// Cluster ids for the contrastive centers.
constexpr int kClusterHealthy = 0;
constexpr int kClusterImpaired = 1;
constexpr int kNumClusters = 2;

// CDR: impaired iff cdr >= 0.5. MMSE: healthy iff mmse >= 27 (the cutoff
// value itself stays healthy). Throws DataError on out-of-range scores.
int binarize_behavior(BehaviorTest test, double value);

}  // namespace bsen
