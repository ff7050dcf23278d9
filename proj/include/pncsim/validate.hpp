#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pncsim {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

/// Runs the cross-module invariant suite with fixed internal seeds:
/// synchronized-form equivalences, the MSUE constants and closed forms
/// against the decomposition oracle, the MMSE-vs-non-MMSE orderings, and
/// the end-to-end identities.
ValidationReport validate_suite(std::uint64_t seed = 0);

void print_report(const ValidationReport& report, std::ostream& out);

}  // namespace pncsim
