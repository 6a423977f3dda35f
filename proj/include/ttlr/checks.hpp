#pragma once

#include <string>
#include <vector>

namespace ttlr {

enum class CheckLevel { quick, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the built-in invariant suite on seeded random instances. quick uses
/// small sizes and few trials; full scales both up.
std::vector<CheckResult> run_checks(CheckLevel level);

}  // namespace ttlr
