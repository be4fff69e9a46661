#include "bsen/behavior.hpp"

#include <cctype>
#include <cmath>

#include "bsen/error.hpp"

namespace bsen {

const char* behavior_name(BehaviorTest t) {
  switch (t) {
    case BehaviorTest::CDR: return "CDR";
    case BehaviorTest::MMSE: return "MMSE";
    case BehaviorTest::None: return "none";
  }
  return "?";
}

BehaviorTest parse_behavior(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "CDR") return BehaviorTest::CDR;
  if (u == "MMSE") return BehaviorTest::MMSE;
  if (u == "NONE") return BehaviorTest::None;
  throw DataError("unknown behavior test '" + s + "'");
}

int binarize_behavior(BehaviorTest test, double value) {
  switch (test) {
    case BehaviorTest::CDR:
      if (!(value >= 0.0) || !std::isfinite(value))
        throw DataError("CDR score out of range (must be >= 0): " + std::to_string(value));
      return value >= 0.5 ? kClusterImpaired : kClusterHealthy;
    case BehaviorTest::MMSE: {
      if (value < 0.0 || value > 30.0 || value != std::floor(value))
        throw DataError("MMSE score out of range (integer in [0,30]): " + std::to_string(value));
      return value >= 27.0 ? kClusterHealthy : kClusterImpaired;
    }
    case BehaviorTest::None:
      break;
  }
  throw DataError("binarize_behavior: behavior test must be CDR or MMSE");
}

}  // namespace bsen
