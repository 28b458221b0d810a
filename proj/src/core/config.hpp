#pragma once

#include <string>
#include <vector>

#include "core/common.hpp"

namespace ck {

// Line-oriented "key = value" configuration with [section] headers and '#'
// comments. Sector lines take the form
//     sector = L M : <profile expression>
// See docs/config.md for the full schema.
struct RunConfig {
    // [grid]
    double k_max = 40.0;
    int N = 400;
    // [model]
    double c0 = 0.0625;
    // [sectors]
    struct SectorSpec {
        int l = 0;
        int m = 0;
        std::string profile;
    };
    std::vector<SectorSpec> sectors;
    // [condensate]
    double m_c0 = 1.0;
    // [time]
    double tau_min = 1e-6;
    double tau_max = 1e4;
    int samples_per_decade = 16;
    double t_max = 0.0; // 0: use the full mapped horizon t(tau_max)
    int decay_samples = 240;
    // [residuals]
    double residual_dt = 1e-3;
    int residual_samples = 41;
    // [tolerances]
    double quad_tol = 1e-12;
    double eig_tol = 1e-13;
    // [output]
    std::string out_dir = "out";
    bool plots = true;
    bool profiles = false;
    Vec t_list;

    void validate() const; // throws ConfigError naming the offending field
    std::string echo() const; // effective config, re-parseable
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace ck
