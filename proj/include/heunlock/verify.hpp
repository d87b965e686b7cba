#pragma once

#include <string>
#include <vector>

namespace heunlock {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
    std::string to_json() const;
};

/// Derivative identity, generating function at |z| = 1, positivity and the
/// series / quadrature / backward-recurrence cross-oracles.
SuiteResult verify_bessel();

/// Exhaustive certified scan at l = 2, components in [-6, 6], x in {0.1, 1, 5, 10},
/// plus the l = 1 count check.
SuiteResult verify_positivity_l2();

/// At every polynomial-existence lambda of the second Heun equation for
/// l in {1, 2, 3}, mu in {0.5, 1, 2}: xi_l certified nonzero, Delta(2 mu)
/// certified positive, Laurent coefficients nonzero and path-consistent, and
/// the entire-solution defect bounded away from zero.
SuiteResult verify_heun_exclusion();

std::vector<std::string> suite_names();
/// DomainError for an unknown name.
SuiteResult run_suite(const std::string& name);

} // namespace heunlock
