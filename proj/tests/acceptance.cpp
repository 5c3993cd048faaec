// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Seed comes from GARDING_SEED when set.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "garding/suite.hpp"

int main(int argc, char** argv) {
    uint64_t seed = 20240808ULL;
    if (const char* env = std::getenv("GARDING_SEED")) seed = std::strtoull(env, nullptr, 10);
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--seed") == 0) seed = std::strtoull(argv[i + 1], nullptr, 10);

    std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(seed));
    const auto results = garding::suite::run_acceptance(seed);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %-38s (%.1fs/%.0fs) %s\n", r.passed ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.seconds, r.budget_seconds, r.detail.c_str());
        all = all && r.passed;
    }
    std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return all ? 0 : 1;
}
