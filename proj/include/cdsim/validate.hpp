// validate.hpp — Self-contained invariant suite: stationarity, KMS detailed
// balance, block/oracle equivalence, gauge cancellation, the analytic
// two-level oracles, and the expansion convergence order. Fault injections
// give the suite documented mutations to catch.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdsim/types.hpp"

namespace cdsim::validate {

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double threshold = 0.0;
    double seconds = 0.0;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;
    bool pass = false;

    const CheckResult* find(const std::string& name) const;
};

struct Options {
    Faults faults;
    // Quick mode trims trial counts and skips the slow convergence check;
    // used by the unit tests and the CLI --quick flag.
    bool quick = false;
    std::uint64_t seed = 20240901;
};

Report run(const Options& options = {});

std::string to_text(const Report& report);
std::string to_json(const Report& report);

// Maps --inject names (kms-sign, gauge-sign, delta-sign) onto Faults.
Faults parse_injection(const std::string& name);

} // namespace cdsim::validate
