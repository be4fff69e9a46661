#pragma once

#include <stdexcept>
#include <string>

namespace bsen {

// Raised for malformed or inconsistent input data (files, manifests, scores).
// The CLI maps DataError to exit code 2, usage problems to exit code 1.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bsen
