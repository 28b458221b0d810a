#pragma once

#include <optional>

#include "core/asymptotics.hpp"
#include "core/config.hpp"

namespace ck {

enum class Stage {
    Evolve,        // trajectory outputs only
    Reconstruct,   // + time change, reconstruction, residuals
    Analyze,       // + asymptotics report
    ScanDepletion, // admissibility threshold scan
    All
};

struct RunReport {
    bool admissible = true;
    bool margin_caveat = false; // sampled sup within 1% of the threshold
    bool breakdown = false; // inadmissible config handled as a report
    double margin = 0.0;
    double sup_g = 0.0;
    double tau_star = 0.0; // when breakdown
    double g_at_tau_star = 0.0;
    double n_star = 0.0;
    double qc_infinity = 0.0;
    double c00 = 0.0;
    double c00_literal = 0.0;
    double slope_u = 0.0;
    double slope_mc = 0.0;
    std::string fit_status;
    double mc_at_tmax = 0.0;
    double t_horizon = 0.0;
    ResidualReport residuals;
    double damping_ratio_const = 0.0;
    double damping_ratio_dev = 0.0;
    double lam_min = 0.0;
    double lam_gap = 0.0;
    double kernel_residual = 0.0;
    bool smallk_marginal = false;
    double smallk_value = 0.0;
    bool bound_holds = false;
    std::vector<std::string> files;
};

// Executes the pipeline stages for `stage`, writes the stage outputs under
// out_dir, and returns the summary. Inadmissible configurations produce a
// breakdown report (and report.breakdown = true) instead of an error.
RunReport run_pipeline(const RunConfig& cfg, const std::string& out_dir, Stage stage);

// gamma / operator report emission (grid and constants from cfg)
void emit_gamma_csv(const RunConfig& cfg, const std::string& out_dir, double scale);
void emit_operator_reports(const RunConfig& cfg, const std::string& out_dir);

// Shipped example configurations (also written by `selftest`).
std::string builtin_config(const std::string& name); // "stationary", "depletion", "decay"

} // namespace ck
