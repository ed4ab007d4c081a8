#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hartree::tools {

struct CheckResult {
    std::string suite;
    std::string name;
    double measured;
    double tolerance;
    bool passed;
};

/// Suites: spectral, semigroup, operators, capacity, solver, or all.
/// Throws std::invalid_argument for an unknown selector.
std::vector<CheckResult> run_verification(const std::string& selector, std::uint64_t seed);

/// Tab-separated lines `suite name measured tolerance PASS|FAIL`, then a summary line.
void print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace hartree::tools
