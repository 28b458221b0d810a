// Exercises the shared-library C interface end to end: handles, error
// reporting, config-driven runs and the breakdown status path.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "condkin.h"

static int failures = 0;

#define CHECK(cond)                                                                   \
    do {                                                                              \
        if (!(cond)) {                                                                \
            std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);               \
            ++failures;                                                               \
        }                                                                             \
    } while (0)

int main()
{
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "condkin_capi_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    CHECK(std::strlen(ck_version()) > 0);

    // gamma surface
    double g = 0.0, err = 0.0;
    CHECK(ck_gamma_eval(0.0, 1e-10, &g, &err) == CK_OK);
    CHECK(g == 0.0);
    CHECK(ck_gamma_eval(1.0, 1e-12, &g, &err) == CK_OK);
    CHECK(std::abs(g - 6.782321497025447) < 1e-9);
    CHECK(ck_gamma_eval(-1.0, 1e-10, &g, &err) == CK_ERR_VALIDATION);
    CHECK(std::strlen(ck_last_error()) > 0);
    double sub = 0.0;
    CHECK(ck_gamma_sub_integral(1e-12, &sub) == CK_OK);
    CHECK(std::abs(sub - 4.207199161058580) < 1e-7);

    // profile surface
    double v = 0.0;
    CHECK(ck_profile_eval("k^2 * exp(-k)", 1.0, &v) == CK_OK);
    CHECK(std::abs(v - std::exp(-1.0)) < 1e-14);
    CHECK(ck_profile_eval("1/(k", 1.0, &v) == CK_ERR_VALIDATION);
    CHECK(std::string(ck_last_error()).find("offset 4") != std::string::npos);
    char buf[128];
    CHECK(ck_profile_print("k ^2*  exp( -k)", buf, sizeof buf) == CK_OK);
    double v2 = 0.0;
    CHECK(ck_profile_eval(buf, 2.0, &v2) == CK_OK);
    CHECK(ck_profile_eval("k^2 * exp(-k)", 2.0, &v) == CK_OK);
    CHECK(v == v2);

    // model handle
    ck_model* m = nullptr;
    CHECK(ck_model_create(0.0, 100, 0.0625, &m) == CK_ERR_VALIDATION);
    CHECK(ck_model_create(20.0, 120, 0.0625, &m) == CK_OK);
    CHECK(ck_model_nodes(m) == 120);
    std::vector<double> k(120), mu(120);
    CHECK(ck_model_grid(m, k.data(), mu.data()) == CK_OK);
    CHECK(std::abs(k[0] - 20.0 / 120.0) < 1e-15);
    double lam_min = 0.0, gap = 0.0, kres = 0.0;
    CHECK(ck_model_eigen_summary(m, &lam_min, &gap, &kres) == CK_OK);
    CHECK(lam_min < 0.0);
    CHECK(gap > 0.0);
    CHECK(kres < 1e-10);
    // kernel mode is stationary under propagate
    std::vector<double> f0(120), out(120);
    for (int i = 0; i < 120; ++i) f0[static_cast<size_t>(i)] = 0.5 * k[static_cast<size_t>(i)];
    CHECK(ck_model_propagate(m, f0.data(), 7.5, out.data()) == CK_OK);
    for (int i = 0; i < 120; ++i)
        CHECK(std::abs(out[static_cast<size_t>(i)] - f0[static_cast<size_t>(i)]) <=
              1e-10 * (1.0 + std::abs(f0[static_cast<size_t>(i)])));
    double ratio = 0.0, dev = 0.0;
    CHECK(ck_model_damping_ratio(m, &ratio, &dev) == CK_OK);
    CHECK(std::abs(ratio - 1.0) < 1e-6); // 16 c0 with c0 = 1/16
    CHECK(dev < 1e-6);
    ck_model_free(m);

    // config text runs, small grid for speed
    const char* good =
        "[grid]\nk_max = 12\nN = 48\n\n[sectors]\nsector = 0 0 : 0.3 * k\n\n"
        "[condensate]\nm_c0 = 1\n\n[time]\ntau_max = 100\n\n[output]\nplots = false\n";
    const std::string run_dir = (tmp / "run").string();
    CHECK(ck_run_config_text(good, run_dir.c_str(), "all") == CK_OK);
    CHECK(fs::exists(fs::path(run_dir) / "summary.json"));
    CHECK(fs::exists(fs::path(run_dir) / "trajectory.csv"));
    CHECK(fs::exists(fs::path(run_dir) / "decay.csv"));
    CHECK(fs::exists(fs::path(run_dir) / "effective.cfg"));

    // decay.csv header is pinned
    {
        FILE* f = std::fopen((run_dir + "/decay.csv").c_str(), "rb");
        CHECK(f != nullptr);
        char line[128] = {0};
        if (f) {
            CHECK(std::fgets(line, sizeof line, f) != nullptr);
            std::fclose(f);
        }
        CHECK(std::string(line) == "t,tau,dist_to_limit,mc,mc_sq_gap\n");
    }

    // validation failure carries the field name
    const char* bad =
        "[grid]\nk_max = 12\nN = 4\n\n[sectors]\nsector = 0 0 : k\n";
    CHECK(ck_run_config_text(bad, (tmp / "bad").string().c_str(), "all") ==
          CK_ERR_VALIDATION);
    CHECK(std::string(ck_last_error()).find("N >= 8") != std::string::npos);

    // inadmissible data: breakdown status + report file
    const char* depleting =
        "[grid]\nk_max = 12\nN = 48\n\n[sectors]\nsector = 0 0 : -1\n\n"
        "[condensate]\nm_c0 = 2\n\n[time]\ntau_max = 1000\n\n[output]\nplots = false\n";
    const std::string bd_dir = (tmp / "breakdown").string();
    CHECK(ck_run_config_text(depleting, bd_dir.c_str(), "all") == CK_ERR_INADMISSIBLE);
    CHECK(fs::exists(fs::path(bd_dir) / "breakdown.json"));

    // builtin configs exposed through the API
    char cfgbuf[2048];
    CHECK(ck_builtin_config("stationary", cfgbuf, sizeof cfgbuf) > 0);
    CHECK(ck_builtin_config("nope", cfgbuf, sizeof cfgbuf) == 0);

    std::printf("capi tests: %s (%d failures)\n", failures ? "FAIL" : "OK", failures);
    return failures;
}
