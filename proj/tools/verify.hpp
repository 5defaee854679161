#pragma once

#include <string>
#include <vector>

#include "cli_common.hpp"

namespace qaoaprep::cli {

struct VerifyOptions {
    int n_max = 10;
    int probes = 100;
    std::uint64_t seed = 12345;
    bool quick = false;    // reduced ranges/probe counts for smoke runs
    bool corrupt = false;  // harness self-test: inject a fake discrepancy
    std::string out;
    std::string format = "csv";
};

// Runs the full cross-validation suite and prints one pass/fail line per
// property. Returns exit_ok when every property holds.
int run_verify(const VerifyOptions& options);

}  // namespace qaoaprep::cli
