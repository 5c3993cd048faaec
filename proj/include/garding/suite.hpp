#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "garding/json_io.hpp"

namespace garding::suite {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

/// Full acceptance battery, one result per criterion, ordered by id.
/// Criteria run on worker threads; each derives its own generator from the
/// seed, so results do not depend on scheduling.
std::vector<CriterionResult> run_acceptance(uint64_t seed, int threads = 0);

/// Summary artifact for the battery; timestamp optional so byte-level
/// comparisons can exclude it at the source.
json summary_json(const std::vector<CriterionResult>& results, uint64_t seed,
                  bool with_timestamp);

/// Seeded report battery (dual evaluations, estimate reports, drift sweep,
/// amplification table). Deterministic: equal seeds give equal bytes.
json report_battery_json(uint64_t seed);

std::string iso_timestamp_utc();

}  // namespace garding::suite
