#pragma once

#include <string>
#include <vector>

namespace ck {

// One verification criterion of the shipped validation suite. The suite is
// deterministic: fixed seeds, fixed summation orders, no wall-clock content
// in any data file it writes.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // measured numbers, one line
};

// Runs the full validation suite at the desk-scale defaults (N = 400,
// k_max = 40). When out_dir is nonempty, data outputs (pipeline runs of the
// builtin configs, the damping report) are written beneath it; the
// determinism criterion always uses its own scratch subdirectories of
// out_dir (or of the system temp directory when out_dir is empty).
std::vector<CriterionResult> run_acceptance(const std::string& out_dir);

} // namespace ck
