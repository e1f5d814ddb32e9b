#pragma once

// Invariant suite shared by `sqwell verify` and the Python module.

#include <string>
#include <vector>

#include "sqwell/metric.hpp"

namespace sqwell {

struct SuiteConfig {
    CouplingPair coupling{1.0, 1.0};
    int levels = 6;
    int grid = 512;
    double tol = kDefaultRootTol;
    MetricWeights weights;  ///< empty means S = 1
    bool allow_indefinite = false;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string note;
};

/// Runs every check that applies to the coupling. A check that does not
/// apply is reported as skipped with the reason in `note`.
std::vector<CheckResult> invariant_suite(const SuiteConfig& cfg);

bool all_passed(const std::vector<CheckResult>& results) noexcept;

}  // namespace sqwell
