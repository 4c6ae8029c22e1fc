#pragma once

#include <string>
#include <vector>

// End-to-end checks of the device model against its measured anchors and
// structural properties. Each criterion reports one pass/fail line; the
// suite is deterministic and runs in seconds.

namespace sawhe {

struct CriterionResult {
    int id = 0;
    std::string label;
    bool pass = false;
    std::string detail;  // the decisive numbers, for the report line
};

std::vector<CriterionResult> run_acceptance();

// One "[ n] PASS/FAIL label: detail" line per criterion plus a summary
// line. all_pass reports the conjunction when non-null.
std::string acceptance_report(const std::vector<CriterionResult>& results,
                              bool* all_pass = nullptr);

}  // namespace sawhe
