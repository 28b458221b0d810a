#include "condkin.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "core/acceptance.hpp"
#include "core/gamma.hpp"
#include "core/pipeline.hpp"
#include "core/profile.hpp"
#include "core/spectral.hpp"

namespace {

thread_local std::string g_last_error;

ck_status fail(ck_status code, const char* what)
{
    g_last_error = what ? what : "unknown error";
    return code;
}

template <typename Fn>
ck_status guarded(Fn&& fn)
{
    try {
        return fn();
    } catch (const ck::InadmissibleError& e) {
        return fail(CK_ERR_INADMISSIBLE, e.what());
    } catch (const ck::ConfigError& e) {
        return fail(CK_ERR_VALIDATION, e.what());
    } catch (const ck::DomainError& e) {
        return fail(CK_ERR_VALIDATION, e.what());
    } catch (const ck::ConvergenceError& e) {
        return fail(CK_ERR_NO_CONVERGENCE, e.what());
    } catch (const std::exception& e) {
        return fail(CK_ERROR, e.what());
    } catch (...) {
        return fail(CK_ERROR, "unknown error");
    }
}

ck::Stage parse_stage(const char* stage)
{
    const std::string s = stage ? stage : "all";
    if (s == "evolve") return ck::Stage::Evolve;
    if (s == "reconstruct") return ck::Stage::Reconstruct;
    if (s == "analyze") return ck::Stage::Analyze;
    if (s == "scan-depletion") return ck::Stage::ScanDepletion;
    if (s == "all") return ck::Stage::All;
    throw ck::ConfigError("unknown stage '" + s + "'");
}

ck_status run_config(ck::RunConfig cfg, const char* out_dir, const char* stage)
{
    const std::string dir = out_dir && *out_dir ? out_dir : cfg.out_dir;
    ck::RunReport rep = ck::run_pipeline(cfg, dir, parse_stage(stage));
    if (rep.breakdown)
        return fail(CK_ERR_INADMISSIBLE,
                    "inadmissible configuration: breakdown report written");
    return CK_OK;
}

} // namespace

struct ck_model {
    ck::RadialGrid grid;
    ck::EquilibriumWeights wts;
    ck::ReductionConstants rc;
    std::unique_ptr<ck::LinearOperator> op;
    std::unique_ptr<ck::EigenSystem> eig;
    std::unique_ptr<ck::DampingReport> damping;

    void ensure_spectrum()
    {
        if (!op) op = std::make_unique<ck::LinearOperator>(
                     ck::assemble_linearized(grid, wts, rc));
        if (!eig) eig = std::make_unique<ck::EigenSystem>(
                      ck::spectral_decompose(*op, grid, wts));
    }
};

extern "C" {

const char* ck_version(void) { return "condkin 1.0.0"; }

const char* ck_last_error(void) { return g_last_error.c_str(); }

void ck_set_threads(int n) { ck::set_thread_count(n); }

ck_status ck_gamma_eval(double x, double tol_rel, double* value, double* err_estimate)
{
    return guarded([&]() -> ck_status {
        if (!value) return fail(CK_ERR_VALIDATION, "value pointer is NULL");
        ck::GammaValue g = ck::gamma_paper(x, tol_rel);
        *value = g.value;
        if (err_estimate) *err_estimate = g.error;
        if (!g.converged)
            return fail(CK_ERR_NO_CONVERGENCE, "gamma quadrature tolerance unreachable");
        return CK_OK;
    });
}

ck_status ck_gamma_sub_integral(double tol_rel, double* value)
{
    return guarded([&]() -> ck_status {
        if (!value) return fail(CK_ERR_VALIDATION, "value pointer is NULL");
        *value = ck::gamma_sub_integral(tol_rel).value;
        return CK_OK;
    });
}

ck_status ck_profile_eval(const char* text, double k, double* value)
{
    return guarded([&]() -> ck_status {
        if (!text || !value) return fail(CK_ERR_VALIDATION, "NULL argument");
        *value = ck::parse_profile(text)->eval(k);
        return CK_OK;
    });
}

ck_status ck_profile_print(const char* text, char* buf, size_t bufsize)
{
    return guarded([&]() -> ck_status {
        if (!text || !buf) return fail(CK_ERR_VALIDATION, "NULL argument");
        const std::string printed = ck::parse_profile(text)->print();
        if (printed.size() + 1 > bufsize)
            return fail(CK_ERR_VALIDATION, "buffer too small for printed profile");
        std::memcpy(buf, printed.c_str(), printed.size() + 1);
        return CK_OK;
    });
}

ck_status ck_model_create(double k_max, int n_nodes, double c0, ck_model** out)
{
    return guarded([&]() -> ck_status {
        if (!out) return fail(CK_ERR_VALIDATION, "out pointer is NULL");
        auto m = std::make_unique<ck_model>();
        m->grid = ck::build_grid(k_max, n_nodes);
        m->wts = ck::equilibrium_weights(m->grid);
        if (!(c0 > 0.0)) return fail(CK_ERR_VALIDATION, "c0 must be positive");
        m->rc.c0 = c0;
        *out = m.release();
        return CK_OK;
    });
}

void ck_model_free(ck_model* m) { delete m; }

int ck_model_nodes(const ck_model* m) { return m ? m->grid.N : 0; }

ck_status ck_model_grid(const ck_model* m, double* k, double* mu)
{
    return guarded([&]() -> ck_status {
        if (!m) return fail(CK_ERR_VALIDATION, "model is NULL");
        for (std::size_t i = 0; i < m->grid.k.size(); ++i) {
            if (k) k[i] = m->grid.k[i];
            if (mu) mu[i] = m->wts.mu[i];
        }
        return CK_OK;
    });
}

ck_status ck_model_eigen_summary(ck_model* m, double* lam_min, double* lam_gap,
                                 double* kernel_residual)
{
    return guarded([&]() -> ck_status {
        if (!m) return fail(CK_ERR_VALIDATION, "model is NULL");
        m->ensure_spectrum();
        if (lam_min) *lam_min = m->eig->lam_min;
        if (lam_gap) *lam_gap = m->eig->lam_gap;
        if (kernel_residual) {
            ck::Vec Ak = m->op->apply(m->grid.k);
            double nAk = 0.0, nA = 0.0, nk = 0.0;
            for (double v : Ak) nAk += v * v;
            for (double v : m->op->A) nA += v * v;
            for (double v : m->grid.k) nk += v * v;
            *kernel_residual = std::sqrt(nAk) / (std::sqrt(nA) * std::sqrt(nk));
        }
        return CK_OK;
    });
}

ck_status ck_model_propagate(ck_model* m, const double* f0, double tau, double* out)
{
    return guarded([&]() -> ck_status {
        if (!m || !f0 || !out) return fail(CK_ERR_VALIDATION, "NULL argument");
        m->ensure_spectrum();
        ck::Vec F0(f0, f0 + m->grid.N);
        ck::Vec v = ck::propagate(*m->eig, F0, tau);
        std::memcpy(out, v.data(), sizeof(double) * v.size());
        return CK_OK;
    });
}

ck_status ck_model_damping_ratio(ck_model* m, double* ratio_const,
                                 double* max_relative_deviation)
{
    return guarded([&]() -> ck_status {
        if (!m) return fail(CK_ERR_VALIDATION, "model is NULL");
        if (!m->damping) {
            ck::GammaTable half = ck::gamma_table(m->grid, 0.5, 1e-12);
            m->damping = std::make_unique<ck::DampingReport>(
                ck::damping_coefficient(m->grid, m->wts, half, m->rc));
        }
        if (ratio_const) *ratio_const = m->damping->ratio_mean;
        if (max_relative_deviation) *max_relative_deviation = m->damping->ratio_max_dev;
        return CK_OK;
    });
}

ck_status ck_run_config_file(const char* config_path, const char* out_dir,
                             const char* stage)
{
    return guarded([&]() -> ck_status {
        if (!config_path) return fail(CK_ERR_VALIDATION, "config path is NULL");
        return run_config(ck::load_config(config_path), out_dir, stage);
    });
}

ck_status ck_run_config_text(const char* config_text, const char* out_dir,
                             const char* stage)
{
    return guarded([&]() -> ck_status {
        if (!config_text) return fail(CK_ERR_VALIDATION, "config text is NULL");
        return run_config(ck::parse_config(config_text), out_dir, stage);
    });
}

ck_status ck_emit_gamma_csv(const char* config_path, const char* out_dir,
                            double argument_scale)
{
    return guarded([&]() -> ck_status {
        ck::RunConfig cfg =
            config_path ? ck::load_config(config_path) : ck::RunConfig{};
        ck::emit_gamma_csv(cfg, out_dir && *out_dir ? out_dir : cfg.out_dir,
                           argument_scale);
        return CK_OK;
    });
}

ck_status ck_emit_operator_reports(const char* config_path, const char* out_dir)
{
    return guarded([&]() -> ck_status {
        ck::RunConfig cfg =
            config_path ? ck::load_config(config_path) : ck::RunConfig{};
        ck::emit_operator_reports(cfg, out_dir && *out_dir ? out_dir : cfg.out_dir);
        return CK_OK;
    });
}

size_t ck_builtin_config(const char* name, char* buf, size_t bufsize)
{
    try {
        const std::string text = ck::builtin_config(name ? name : "");
        if (!buf || bufsize < text.size() + 1) return 0;
        std::memcpy(buf, text.c_str(), text.size() + 1);
        return text.size();
    } catch (...) {
        return 0;
    }
}

ck_status ck_selftest(const char* out_dir, int* criteria_passed, int* criteria_total)
{
    return guarded([&]() -> ck_status {
        std::vector<ck::CriterionResult> results =
            ck::run_acceptance(out_dir ? out_dir : "");
        int pass = 0;
        for (const auto& r : results) {
            std::printf("[%s] criterion %2d: %s - %s\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.detail.c_str());
            if (r.pass) ++pass;
        }
        std::printf("%d/%zu criteria passed\n", pass, results.size());
        if (criteria_passed) *criteria_passed = pass;
        if (criteria_total) *criteria_total = static_cast<int>(results.size());
        return pass == static_cast<int>(results.size())
                   ? CK_OK
                   : fail(CK_ERROR, "one or more acceptance criteria failed");
    });
}

} // extern "C"
