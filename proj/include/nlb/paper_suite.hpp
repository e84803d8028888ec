#pragma once

#include <cstdint>
#include <string>
#include <vector>

// The quantitative result table: every published number this library
// reproduces, each as one pass/fail check. Shared by the verify-paper CLI
// subcommand and the acceptance test binary.

namespace nlb {

struct CheckResult {
    std::string id;           // "1" .. "9", "10a" .. "10g"
    std::string description;
    bool pass = false;
    std::string detail;       // computed vs expected
    double seconds = 0.0;
};

struct SuiteOptions {
    bool fast = false;        // volume check at 1e6 samples, widened tolerance
    int workers = 0;          // 0: hardware concurrency
    std::uint64_t volume_seed = 987654321;
    std::string only;         // run checks whose id starts with this prefix
};

std::vector<CheckResult> run_paper_suite(const SuiteOptions& opt = {});

}  // namespace nlb
