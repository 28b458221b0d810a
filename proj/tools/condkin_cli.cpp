// condkin command-line front end. Links the shared C API only.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "condkin.h"

namespace {

int status_to_exit(ck_status s)
{
    switch (s) {
    case CK_OK: return 0;
    case CK_ERR_VALIDATION: return 2;
    case CK_ERR_INADMISSIBLE: return 3;
    case CK_ERR_NO_CONVERGENCE: return 4;
    default: return 1;
    }
}

int finish(ck_status s)
{
    if (s != CK_OK) std::fprintf(stderr, "condkin: %s\n", ck_last_error());
    if (s == CK_ERR_INADMISSIBLE)
        std::fprintf(stderr, "condkin: breakdown report written (expected for "
                             "inadmissible data)\n");
    return status_to_exit(s);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"condkin - linearized condensate/normal-fluid kinetics"};
    app.set_version_flag("--version", std::string(ck_version()));
    app.fallthrough(); // global flags may follow the subcommand name

    std::string config_path;
    std::string out_dir;
    int threads = 1;
    unsigned seed = 0;
    app.add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for fuzz helpers (unused by runs)");

    double gamma_scale = 1.0;
    CLI::App* cmd_gamma = app.add_subcommand("gamma", "tabulate the damping function");
    cmd_gamma->add_option("--scale", gamma_scale, "argument scale (1 or 0.5)");

    CLI::App* cmd_operator =
        app.add_subcommand("operator", "damping-ratio report and spectral summary");
    CLI::App* cmd_evolve = app.add_subcommand("evolve", "trajectory of the linear flow");
    CLI::App* cmd_reconstruct =
        app.add_subcommand("reconstruct", "coupled reconstruction via the time change");
    CLI::App* cmd_analyze = app.add_subcommand("analyze", "asymptotics and rate report");
    CLI::App* cmd_scan =
        app.add_subcommand("scan-depletion", "admissibility threshold scan");
    CLI::App* cmd_selftest = app.add_subcommand("selftest", "run the acceptance suite");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    ck_set_threads(threads);
    const char* cfg = config_path.empty() ? nullptr : config_path.c_str();
    const char* out = out_dir.empty() ? nullptr : out_dir.c_str();

    if (cmd_gamma->parsed())
        return finish(ck_emit_gamma_csv(cfg, out ? out : "out_gamma", gamma_scale));
    if (cmd_operator->parsed())
        return finish(ck_emit_operator_reports(cfg, out ? out : "out_operator"));

    auto stage_run = [&](const char* stage) -> int {
        if (!cfg) {
            std::fprintf(stderr, "condkin: %s requires --config\n", stage);
            return 2;
        }
        return finish(ck_run_config_file(cfg, out, stage));
    };
    if (cmd_evolve->parsed()) return stage_run("evolve");
    if (cmd_reconstruct->parsed()) return stage_run("reconstruct");
    if (cmd_analyze->parsed()) return stage_run("analyze");
    if (cmd_scan->parsed()) return stage_run("scan-depletion");
    if (cmd_selftest->parsed()) {
        int pass = 0, total = 0;
        ck_status s = ck_selftest(out ? out : "selftest_out", &pass, &total);
        if (s != CK_OK && pass == 0 && total == 0)
            std::fprintf(stderr, "condkin: %s\n", ck_last_error());
        return s == CK_OK ? 0 : 1;
    }
    return 2;
}
