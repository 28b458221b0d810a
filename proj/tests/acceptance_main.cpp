// Acceptance gate: runs every validation criterion at the desk-scale
// defaults and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.

#include <cstdio>

#include "core/acceptance.hpp"

int main()
{
    std::vector<ck::CriterionResult> results = ck::run_acceptance("acceptance_out");
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s\n        %s\n", r.pass ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed;
}
