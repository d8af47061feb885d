#pragma once
#include <string>
#include <vector>

namespace pbus::accept {

// one verification criterion: a measured quantity compared against a pinned
// expectation with an explicit tolerance band
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // "measured ... expected ..." summary
    double seconds = 0; // wall time attributed to this criterion
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
    double total_seconds = 0;
};

// run the full verification suite. `threads` > 1 fans the long integrations
// out over a thread pool; `dt_fs` overrides the integrator step (the pinned
// tolerances assume the default 1 fs).
SuiteResult run_all(int threads = 1, double dt_fs = 1.0);

// fixed-width pass/fail table, one line per criterion
std::string format_table(const SuiteResult& suite);

} // namespace pbus::accept
