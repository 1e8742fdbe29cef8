#pragma once

#include <string>
#include <vector>

namespace uem::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Structural verifications of the population oracles and EM invariants.
/// Each runs in seconds.
std::vector<CheckResult> run_property_checks();

/// Monte Carlo verifications of error rates, convergence-time trends,
/// sign-correction success and concentration. Runtime is minutes.
std::vector<CheckResult> run_quantitative_checks();

}  // namespace uem::checks
