#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace decaylife::cli {

struct PropertyResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Runs the invariant suites of every module.  `quick` shrinks draw counts.
std::vector<PropertyResult> run_validation(std::uint64_t seed, bool quick);

}  // namespace decaylife::cli
