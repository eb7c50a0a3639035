#pragma once

#include <string>
#include <vector>

#include "relcav/cli/config.hpp"

namespace relcav::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the invariant suite (mode orthonormality, unitarity, symplecticity,
/// state purity, closed-form agreement where applicable) on a config.
std::vector<CheckResult> validate_config(const RunConfig& cfg, CoefficientCache& cache);

}  // namespace relcav::cli
