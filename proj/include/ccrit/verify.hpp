#pragma once

#include <string>
#include <vector>

#include "ccrit/series.hpp"

namespace ccrit::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double milliseconds = 0.0;
};

/// Run every machine-checkable identity of the library: the constants against
/// the published figures, the dual-representation equivalences, the
/// Epstein-Hurwitz identity, the gap-equation oracle, the pole cancellation
/// and the critical-law exactness checks. `base` caps the index budget of
/// every internal policy (so an externally injected max_index immediately
/// fails the suite).
std::vector<CheckResult> run_all(const TruncationPolicy& base);

/// True iff every check passed.
bool all_passed(const std::vector<CheckResult>& results);

} // namespace ccrit::verify
