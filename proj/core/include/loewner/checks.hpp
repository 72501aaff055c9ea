#pragma once

#include <string>
#include <vector>

namespace loewner::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class Level { Fast, Full };

// Fast: the deterministic suites (exponent algebra, dualities, flow
// exactness, inequality corpus, spectrum curves).  Full: additionally the
// Monte-Carlo scaling, martingale, count, harmonic-measure and radial-SDE
// checks at their pinned sample sizes and tolerances.
std::vector<CheckResult> run_checks(Level level, unsigned workers = 0,
                                    bool verbose = false);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace loewner::checks
