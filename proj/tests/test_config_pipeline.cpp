#include <doctest.h>

#include <filesystem>

#include "core/io.hpp"
#include "core/pipeline.hpp"

using namespace ck;
namespace fs = std::filesystem;

namespace {

const char* kSmallRun =
    "[grid]\n"
    "k_max = 12\n"
    "N = 48\n"
    "\n"
    "[sectors]\n"
    "sector = 0 0 : -1\n"
    "sector = 1 0 : k * exp(-k)\n"
    "\n"
    "[condensate]\n"
    "m_c0 = 8\n"
    "\n"
    "[time]\n"
    "tau_min = 1e-5\n"
    "tau_max = 2000\n"
    "samples_per_decade = 12\n"
    "\n"
    "[output]\n"
    "plots = true\n";

fs::path scratch(const char* leaf)
{
    fs::path p = fs::temp_directory_path() / "condkin_pipeline_tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("config parse, defaults, validation messages")
{
    RunConfig cfg = parse_config(kSmallRun);
    CHECK(cfg.k_max == 12.0);
    CHECK(cfg.N == 48);
    CHECK(cfg.sectors.size() == 2);
    CHECK(cfg.sectors[1].l == 1);
    CHECK(cfg.m_c0 == 8.0);
    CHECK(cfg.samples_per_decade == 12);
    CHECK(cfg.plots);
    cfg.validate();

    RunConfig bad = cfg;
    bad.N = 4;
    CHECK_THROWS_WITH_AS(bad.validate(), "config: N >= 8 required", ConfigError);
    RunConfig badl = cfg;
    badl.sectors[0].l = 9;
    CHECK_THROWS_AS(badl.validate(), ConfigError);
    RunConfig badp = cfg;
    badp.sectors[0].profile = "1/(k";
    CHECK_THROWS_AS(badp.validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("[grid]\nk_max = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mystery = 1\n"), ConfigError);
}

TEST_CASE("config echo round-trips to an identical effective config")
{
    RunConfig cfg = parse_config(kSmallRun);
    RunConfig again = parse_config(cfg.echo());
    CHECK(again.echo() == cfg.echo());
}

TEST_CASE("re-running from the echoed config reproduces the run byte for byte")
{
    RunConfig cfg = parse_config(kSmallRun);
    fs::path a = scratch("echo_a"), b = scratch("echo_b");
    RunReport ra = run_pipeline(cfg, a.string(), Stage::All);
    RunConfig echoed = parse_config(io::read_text((a / "effective.cfg").string()));
    RunReport rb = run_pipeline(echoed, b.string(), Stage::All);
    REQUIRE(ra.files.size() == rb.files.size());
    for (const auto& f : ra.files) {
        CAPTURE(f);
        CHECK(io::read_text((a / f).string()) == io::read_text((b / f).string()));
    }
}

TEST_CASE("pipeline writes the documented outputs and is deterministic")
{
    RunConfig cfg = parse_config(kSmallRun);
    fs::path a = scratch("a"), b = scratch("b");
    RunReport ra = run_pipeline(cfg, a.string(), Stage::All);
    RunReport rb = run_pipeline(cfg, b.string(), Stage::All);
    CHECK(ra.admissible);
    CHECK_FALSE(ra.breakdown);
    CHECK(ra.qc_infinity > 0.0);
    for (const char* f :
         {"trajectory.csv", "reconstruct.csv", "decay.csv", "summary.json",
          "analysis.json", "effective.cfg", "decay.svg", "mc.svg", "spectrum.svg"}) {
        CAPTURE(f);
        CHECK(fs::exists(a / f));
        CHECK(io::read_text((a / f).string()) == io::read_text((b / f).string()));
    }
    // summary carries the pinned keys
    const std::string summary = io::read_text((a / "summary.json").string());
    for (const char* key : {"\"admissible\"", "\"margin\"", "\"n_star\"",
                            "\"qc_infinity\"", "\"slope_u\"", "\"slope_mc\"",
                            "\"residuals\""}) {
        CAPTURE(key);
        CHECK(summary.find(key) != std::string::npos);
    }
    // SVG output is XML with one polyline per series
    const std::string svg = io::read_text((a / "mc.svg").string());
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("stationary config: constant condensate, vanishing residuals")
{
    RunConfig cfg = parse_config(
        "[grid]\nk_max = 12\nN = 48\n\n[sectors]\nsector = 0 0 : 0.3 * k\n\n"
        "[condensate]\nm_c0 = 1\n\n[time]\ntau_max = 1000\n\n"
        "[output]\nplots = false\nprofiles = true\nt_list = 0 1 10\n");
    fs::path d = scratch("stationary");
    RunReport rep = run_pipeline(cfg, d.string(), Stage::All);
    CHECK(rep.admissible);
    CHECK(rep.residuals.r_mass_abs <= 1e-10);
    CHECK(rep.residuals.r_energy_abs <= 1e-10);
    CHECK(rep.residuals.r_ode_abs <= 1e-10);
    CHECK(rep.mc_at_tmax == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.fit_status == "stationary");
    CHECK(fs::exists(d / "snapshots.csv"));
    CHECK(fs::exists(d / "profiles.csv"));
}

TEST_CASE("inadmissible config produces a breakdown report, not a crash")
{
    RunConfig cfg = parse_config(kSmallRun);
    cfg.m_c0 = 1.0; // far below the threshold for u0 = -1 data
    fs::path d = scratch("bd");
    RunReport rep = run_pipeline(cfg, d.string(), Stage::All);
    CHECK(rep.breakdown);
    CHECK_FALSE(rep.admissible);
    CHECK(rep.tau_star > 0.0);
    CHECK(fs::exists(d / "breakdown.json"));
}

TEST_CASE("scan stage emits the threshold table")
{
    RunConfig cfg = parse_config(kSmallRun);
    fs::path d = scratch("scan");
    RunReport rep = run_pipeline(cfg, d.string(), Stage::ScanDepletion);
    (void)rep;
    CHECK(fs::exists(d / "scan.csv"));
    const std::string scan = io::read_text((d / "scan.csv").string());
    CHECK(scan.rfind("m_c0,verdict,margin_or_tau_star", 0) == 0);
    CHECK(scan.find("breakdown") != std::string::npos);
    CHECK(scan.find("admissible") != std::string::npos);
}

TEST_CASE("gamma and operator report emission")
{
    RunConfig cfg = parse_config(kSmallRun);
    fs::path d = scratch("reports");
    emit_gamma_csv(cfg, d.string(), 1.0);
    emit_operator_reports(cfg, d.string());
    CHECK(io::read_text((d / "gamma.csv").string()).rfind("x,gamma,err_estimate", 0) == 0);
    CHECK(io::read_text((d / "damping_ratio.csv").string())
              .rfind("k,d,M,gamma_half,ratio", 0) == 0);
    CHECK(fs::exists(d / "spectral_summary.json"));
}

TEST_CASE("builtin configs parse and validate")
{
    for (const char* name : {"stationary", "depletion", "decay"}) {
        RunConfig cfg = parse_config(builtin_config(name));
        cfg.validate();
        CHECK(cfg.N == 400);
    }
    CHECK_THROWS_AS(builtin_config("nope"), ConfigError);
}
