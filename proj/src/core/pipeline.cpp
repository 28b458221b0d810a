#include "core/pipeline.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/gamma.hpp"
#include "core/io.hpp"
#include "core/profile.hpp"

namespace ck {

using ordered_json = nlohmann::ordered_json;

namespace {

HarmonicField build_field(const RunConfig& cfg, const RadialGrid& grid)
{
    HarmonicField f;
    for (const auto& sp : cfg.sectors) {
        ProfileNode expr = parse_profile(sp.profile);
        Sector s;
        s.l = sp.l;
        s.m = sp.m;
        s.profile_text = sp.profile;
        s.radial.resize(grid.k.size());
        for (std::size_t i = 0; i < grid.k.size(); ++i) s.radial[i] = expr->eval(grid.k[i]);
        f.add(std::move(s));
    }
    f.validate();
    return f;
}

Vec log_t_grid(double t_max, int n)
{
    Vec out;
    out.reserve(static_cast<std::size_t>(n));
    const double L = std::log1p(t_max);
    for (int j = 0; j < n; ++j) {
        const double t = std::expm1(L * j / (n - 1));
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
}

std::string sector_tag(int l, int m)
{
    std::ostringstream os;
    os << l << ":" << m;
    return os.str();
}

} // namespace

RunReport run_pipeline(const RunConfig& cfg, const std::string& out_dir, Stage stage)
{
    cfg.validate();
    if (cfg.sectors.empty())
        throw ConfigError("config: at least one sector is required for a run");
    io::ensure_dir(out_dir);
    RunReport rep;
    auto emit = [&](const std::string& name) { rep.files.push_back(name); };

    // ---- stage: grid / weights / operator / spectrum -----------------
    RadialGrid grid = build_grid(cfg.k_max, cfg.N);
    EquilibriumWeights wts = equilibrium_weights(grid);
    ReductionConstants rc;
    rc.c0 = cfg.c0;
    HarmonicField u0 = build_field(cfg, grid);
    LinearOperator op = assemble_linearized(grid, wts, rc);
    EigenSystem eig = spectral_decompose(op, grid, wts, cfg.eig_tol);
    rep.lam_min = eig.lam_min;
    rep.lam_gap = eig.lam_gap;
    {
        Vec Ak = op.apply(grid.k);
        double nAk = 0.0, nA = 0.0, nk = 0.0;
        for (double v : Ak) nAk += v * v;
        for (double v : op.A) nA += v * v;
        for (double v : grid.k) nk += v * v;
        rep.kernel_residual = std::sqrt(nAk) / (std::sqrt(nA) * std::sqrt(nk));
    }
    const double rate_k1 = 16.0 * rc.prefactor() * gamma_paper(0.5 * grid.h, cfg.quad_tol).value;

    // ---- asymptotics of the data --------------------------------------
    AsymptoticState asym = u_infinity(u0, grid, wts);
    rep.n_star = asym.n_star;
    for (const auto& c : asym.coefs)
        if (c.l == 0 && c.m == 0) {
            rep.c00 = c.c;
            rep.c00_literal = c.c_literal;
        }

    // ---- trajectory ----------------------------------------------------
    Vec taus = geometric_tau(cfg.tau_min, cfg.tau_max, cfg.samples_per_decade);
    TrajectoryRecord traj = trajectory(eig, u0, grid, wts, taus, cfg.profiles);
    {
        io::Csv csv({"tau", "sector", "m0", "m1", "dist_to_limit"});
        for (const auto& tr : traj.sectors)
            for (std::size_t i = 0; i < taus.size(); ++i)
                csv.row_mixed({io::fmt17(taus[i]), sector_tag(tr.l, tr.m),
                               io::fmt17(tr.m0[i]), io::fmt17(tr.m1[i]),
                               io::fmt17(tr.dist_to_limit[i])});
        csv.write(out_dir + "/trajectory.csv");
        emit("trajectory.csv");
    }
    if (cfg.profiles) {
        io::Csv csv({"sector", "tau", "k", "value"});
        for (const auto& tr : traj.sectors)
            for (std::size_t i = 0; i < taus.size(); ++i)
                for (std::size_t j = 0; j < grid.k.size(); ++j)
                    csv.row_mixed({sector_tag(tr.l, tr.m), io::fmt17(taus[i]),
                                   io::fmt17(grid.k[j]), io::fmt17(tr.profiles[i][j])});
        csv.write(out_dir + "/snapshots.csv");
        emit("snapshots.csv");
    }
    if (stage == Stage::Evolve) {
        io::write_text(out_dir + "/effective.cfg", cfg.echo());
        emit("effective.cfg");
        return rep;
    }

    // ---- time change ----------------------------------------------------
    const Sector* s00 = u0.find(0, 0);
    if (!s00)
        throw ConfigError("config: the condensate coupling needs sector (0,0)");
    MassModeSum modes = mass_mode_sum(eig, s00->radial, wts);
    Admissibility verdict = check_admissibility(cfg.m_c0, modes, rep.n_star, taus);
    rep.admissible = verdict.admissible;
    rep.margin = verdict.margin;
    rep.margin_caveat = verdict.caveat;
    rep.sup_g = verdict.sup_g;

    if (stage == Stage::ScanDepletion) {
        DepletionScan scan;
        if (verdict.sup_g <= 1e-13) {
            scan.stationary = true;
        } else {
            const double thr = std::sqrt(2.0 * verdict.sup_g);
            scan = depletion_scan(modes, rep.n_star, taus, 0.25 * thr, 4.0 * thr, 1e-4);
        }
        io::Csv csv({"m_c0", "verdict", "margin_or_tau_star"});
        for (const auto& r : scan.rows)
            csv.row_mixed({io::fmt17(r.m_c0), r.admissible ? "admissible" : "breakdown",
                           io::fmt17(r.margin_or_tau_star)});
        csv.write(out_dir + "/scan.csv");
        emit("scan.csv");
        ordered_json j;
        j["stationary"] = scan.stationary;
        j["sup_g"] = scan.sup_g;
        j["threshold_m_c0"] = scan.threshold;
        io::write_text(out_dir + "/scan_summary.json", j.dump(2) + "\n");
        emit("scan_summary.json");
        io::write_text(out_dir + "/effective.cfg", cfg.echo());
        emit("effective.cfg");
        return rep;
    }

    if (!verdict.admissible) {
        rep.breakdown = true;
        rep.tau_star = verdict.tau_star;
        rep.g_at_tau_star = modes.eval_g(verdict.tau_star);
        ordered_json j;
        j["admissible"] = false;
        j["margin"] = verdict.margin;
        j["sup_g"] = verdict.sup_g;
        j["tau_star"] = verdict.tau_star;
        j["g_at_tau_star"] = rep.g_at_tau_star;
        j["m_c0"] = cfg.m_c0;
        j["n_star"] = rep.n_star;
        io::write_text(out_dir + "/breakdown.json", j.dump(2) + "\n");
        emit("breakdown.json");
        io::write_text(out_dir + "/effective.cfg", cfg.echo());
        emit("effective.cfg");
        return rep;
    }

    TimeChangeMap map = build_map(cfg.m_c0, modes, rep.n_star, taus);
    rep.qc_infinity = map.q_inf;
    rep.t_horizon = map.t.back();
    const double t_max = cfg.t_max > 0.0 ? std::min(cfg.t_max, map.t.back()) : map.t.back();

    // reconstruction on the requested t list plus the decay log grid
    Vec t_decay = log_t_grid(t_max, cfg.decay_samples);
    ReconstructedRun run = reconstruct(eig, map, u0, grid, wts, t_decay, false);
    rep.mc_at_tmax = run.m_c.back();
    {
        io::Csv csv({"t", "tau", "m_c", "mass_moment", "energy_moment", "dist_to_limit"});
        const auto& tr = run.sectors.front();
        for (std::size_t i = 0; i < t_decay.size(); ++i)
            csv.row({t_decay[i], run.tau[i], run.m_c[i], tr.m0[i], tr.m1[i],
                     tr.dist_to_limit[i]});
        csv.write(out_dir + "/reconstruct.csv");
        emit("reconstruct.csv");
    }
    Vec dist(t_decay.size()), mcsq_gap(t_decay.size());
    {
        const auto& tr = run.sectors.front();
        const double asym_sq = map.q_inf * map.q_inf;
        io::Csv csv({"t", "tau", "dist_to_limit", "mc", "mc_sq_gap"});
        for (std::size_t i = 0; i < t_decay.size(); ++i) {
            dist[i] = tr.dist_to_limit[i];
            mcsq_gap[i] = std::abs(run.m_c[i] * run.m_c[i] - asym_sq);
            csv.row({t_decay[i], run.tau[i], dist[i], run.m_c[i], mcsq_gap[i]});
        }
        csv.write(out_dir + "/decay.csv");
        emit("decay.csv");
    }
    if (!cfg.t_list.empty()) {
        Vec ts = cfg.t_list;
        ReconstructedRun snap = reconstruct(eig, map, u0, grid, wts, ts, true);
        io::Csv csv({"sector", "t", "k", "value"});
        for (const auto& tr : snap.sectors)
            for (std::size_t i = 0; i < ts.size(); ++i)
                for (std::size_t j = 0; j < grid.k.size(); ++j)
                    csv.row_mixed({sector_tag(tr.l, tr.m), io::fmt17(ts[i]),
                                   io::fmt17(grid.k[j]), io::fmt17(tr.profiles[i][j])});
        csv.write(out_dir + "/profiles.csv");
        emit("profiles.csv");
    }

    // ---- residuals -------------------------------------------------------
    GammaTable gfull = gamma_table(grid, 1.0, cfg.quad_tol);
    const double t0 = 50.0 * cfg.residual_dt;
    rep.residuals = residuals(eig, op, grid, wts, map, u0, gfull, t0, cfg.residual_dt,
                              cfg.residual_samples);

    // ---- decay fit and diagnostics ----------------------------------------
    DecayFit fit = decay_fit(t_decay, dist, mcsq_gap, rate_k1, map.q_inf * map.q_inf,
                             dist.empty() ? 0.0 : dist.front());
    rep.slope_u = fit.slope_u;
    rep.slope_mc = fit.slope_mc;
    rep.bound_holds = fit.bound_holds;
    rep.fit_status = fit.status == DecayFit::Status::Ok ? "ok"
                     : fit.status == DecayFit::Status::Stationary ? "stationary"
                                                                  : "window_too_short";

    GammaTable ghalf = gamma_table(grid, 0.5, cfg.quad_tol);
    DampingReport drep = damping_coefficient(grid, wts, ghalf, rc);
    rep.damping_ratio_const = drep.ratio_mean;
    rep.damping_ratio_dev = drep.ratio_max_dev;

    SmallkNorm smallk;
    {
        ProfileNode expr = parse_profile(s00->profile_text.empty() ? std::string("0")
                                                                   : s00->profile_text);
        smallk = weighted_smallk_norm([&expr](double k) { return expr->eval(k); }, grid);
    }
    rep.smallk_marginal = smallk.marginal;
    rep.smallk_value = smallk.value;

    if (stage == Stage::Analyze || stage == Stage::All) {
        ordered_json j;
        ordered_json coefs = ordered_json::array();
        for (const auto& c : asym.coefs) {
            ordered_json e;
            e["l"] = c.l;
            e["m"] = c.m;
            e["c_projection"] = c.c;
            e["c_literal_dmu_integral"] = c.c_literal;
            coefs.push_back(e);
        }
        j["c_lm"] = coefs;
        j["n_star"] = rep.n_star;
        j["slope_u"] = fit.slope_u;
        j["slope_mc"] = fit.slope_mc;
        j["fit_status"] = rep.fit_status;
        j["fit_message"] = fit.message;
        j["window"] = {fit.t_lo, fit.t_hi};
        j["window_points"] = fit.points;
        j["window_spans_two_decades"] = fit.window_spans_two_decades;
        j["C_fit"] = fit.C_fit;
        j["decay_bound_holds"] = fit.bound_holds;
        j["weighted_smallk_norm"] = smallk.value;
        j["weighted_smallk_norm_refined"] = smallk.value_fine;
        j["weighted_smallk_marginal"] = smallk.marginal;
        j["rate_k1"] = rate_k1;
        io::write_text(out_dir + "/analysis.json", j.dump(2) + "\n");
        emit("analysis.json");
    }

    // ---- summary -----------------------------------------------------------
    {
        ordered_json j;
        j["admissible"] = rep.admissible;
        j["margin"] = rep.margin;
        j["margin_caveat"] = rep.margin_caveat;
        j["n_star"] = rep.n_star;
        j["qc_infinity"] = rep.qc_infinity;
        j["slope_u"] = rep.slope_u;
        j["slope_mc"] = rep.slope_mc;
        ordered_json r;
        r["mass"] = rep.residuals.r_mass;
        r["energy"] = rep.residuals.r_energy;
        r["ode"] = rep.residuals.r_ode;
        r["mass_abs"] = rep.residuals.r_mass_abs;
        r["energy_abs"] = rep.residuals.r_energy_abs;
        r["ode_abs"] = rep.residuals.r_ode_abs;
        r["dt"] = rep.residuals.dt;
        j["residuals"] = r;
        j["fit_status"] = rep.fit_status;
        j["mc_at_tmax"] = rep.mc_at_tmax;
        j["t_horizon"] = rep.t_horizon;
        j["extrapolated_beyond_horizon"] = run.any_extrapolated;
        j["c00_projection"] = rep.c00;
        j["c00_literal"] = rep.c00_literal;
        j["damping_ratio_const"] = rep.damping_ratio_const;
        j["damping_ratio_max_dev"] = rep.damping_ratio_dev;
        j["lam_min"] = rep.lam_min;
        j["lam_gap"] = rep.lam_gap;
        j["kernel_residual"] = rep.kernel_residual;
        j["rate_k1"] = rate_k1;
        j["c0"] = cfg.c0;
        io::write_text(out_dir + "/summary.json", j.dump(2) + "\n");
        emit("summary.json");
    }

    // ---- plots ---------------------------------------------------------------
    if (cfg.plots) {
        {
            io::SvgPlot p;
            p.title = "distance to the asymptotic state";
            p.logx = true;
            p.logy = true;
            io::SvgPlot::Series s;
            s.name = "||u(t)-u_inf||";
            for (std::size_t i = 0; i < t_decay.size(); ++i) {
                s.x.push_back(1.0 + t_decay[i]);
                s.y.push_back(dist[i]);
            }
            p.series.push_back(s);
            io::SvgPlot::Series b;
            b.name = "fitted bound";
            if (fit.status == DecayFit::Status::Ok) {
                for (std::size_t i = 0; i < t_decay.size(); ++i) {
                    b.x.push_back(1.0 + t_decay[i]);
                    b.y.push_back(fit.C_fit /
                                  std::sqrt(1.0 + t_decay[i] / (map.q_inf * map.q_inf)));
                }
                p.series.push_back(b);
            }
            p.write(out_dir + "/decay.svg");
            emit("decay.svg");
        }
        {
            io::SvgPlot p;
            p.title = "condensate mass";
            io::SvgPlot::Series s;
            s.name = "m_c(t)";
            s.x = t_decay;
            s.y = run.m_c;
            p.series.push_back(s);
            p.write(out_dir + "/mc.svg");
            emit("mc.svg");
        }
        {
            io::SvgPlot p;
            p.title = "relaxation spectrum";
            p.logy = true;
            io::SvgPlot::Series s;
            s.name = "|lambda_j|";
            for (std::size_t j = 1; j < eig.lam.size(); ++j) {
                s.x.push_back(static_cast<double>(j));
                s.y.push_back(std::abs(eig.lam[j]));
            }
            p.series.push_back(s);
            p.write(out_dir + "/spectrum.svg");
            emit("spectrum.svg");
        }
    }

    io::write_text(out_dir + "/effective.cfg", cfg.echo());
    emit("effective.cfg");
    return rep;
}

void emit_gamma_csv(const RunConfig& cfg, const std::string& out_dir, double scale)
{
    cfg.validate();
    io::ensure_dir(out_dir);
    RadialGrid grid = build_grid(cfg.k_max, cfg.N);
    GammaTable t = gamma_table(grid, scale, cfg.quad_tol);
    io::Csv csv({"x", "gamma", "err_estimate"});
    for (std::size_t i = 0; i < t.x.size(); ++i) csv.row({t.x[i], t.value[i], t.error[i]});
    csv.write(out_dir + "/gamma.csv");
}

void emit_operator_reports(const RunConfig& cfg, const std::string& out_dir)
{
    cfg.validate();
    io::ensure_dir(out_dir);
    RadialGrid grid = build_grid(cfg.k_max, cfg.N);
    EquilibriumWeights wts = equilibrium_weights(grid);
    ReductionConstants rc;
    rc.c0 = cfg.c0;
    LinearOperator op = assemble_linearized(grid, wts, rc);
    EigenSystem eig = spectral_decompose(op, grid, wts, cfg.eig_tol);
    GammaTable ghalf = gamma_table(grid, 0.5, cfg.quad_tol);
    DampingReport drep = damping_coefficient(grid, wts, ghalf, rc);
    io::Csv csv({"k", "d", "M", "gamma_half", "ratio"});
    for (std::size_t i = 0; i < grid.k.size(); ++i)
        csv.row({grid.k[i], drep.d[i], wts.M[i], drep.gamma_half[i], drep.ratio[i]});
    csv.write(out_dir + "/damping_ratio.csv");

    Vec Ak = op.apply(grid.k);
    double nAk = 0.0, nA = 0.0, nk = 0.0;
    for (double v : Ak) nAk += v * v;
    for (double v : op.A) nA += v * v;
    for (double v : grid.k) nk += v * v;
    ordered_json j;
    j["lam_min"] = eig.lam_min;
    j["lam_gap"] = eig.lam_gap;
    j["lam_max"] = eig.lam.front();
    j["kernel_residual"] = std::sqrt(nAk) / (std::sqrt(nA) * std::sqrt(nk));
    j["kernel_cosine"] = eig.kernel_cosine;
    j["reconstruction_residual"] = eig.offdiag_residual;
    j["damping_ratio_const"] = drep.ratio_mean;
    j["damping_ratio_max_dev"] = drep.ratio_max_dev;
    j["c0"] = cfg.c0;
    io::write_text(out_dir + "/spectral_summary.json", j.dump(2) + "\n");
}

std::string builtin_config(const std::string& name)
{
    if (name == "stationary")
        return "# stationary pair: kernel-mode data, constant condensate\n"
               "[grid]\nk_max = 40\nN = 400\n\n"
               "[sectors]\nsector = 0 0 : 0.3 * k\n\n"
               "[condensate]\nm_c0 = 1\n\n"
               "[time]\ntau_max = 1e4\n\n"
               "[output]\ndir = out_stationary\n";
    if (name == "depletion")
        return "# mass-absorbing data below the admissibility threshold:\n"
               "# the reconstruction stops at finite tau* with a breakdown report\n"
               "[grid]\nk_max = 40\nN = 400\n\n"
               "[sectors]\nsector = 0 0 : -1\n\n"
               "[condensate]\nm_c0 = 5\n\n"
               "[time]\ntau_max = 1e4\n\n"
               "[output]\ndir = out_depletion\n";
    if (name == "decay")
        return "# relaxation benchmark: exponential-profile data, large condensate\n"
               "[grid]\nk_max = 40\nN = 400\n\n"
               "[sectors]\nsector = 0 0 : exp(-k)\n\n"
               "[condensate]\nm_c0 = 10\n\n"
               "[time]\ntau_max = 1e4\n\n"
               "[output]\ndir = out_decay\n";
    throw ConfigError("unknown builtin config '" + name + "'");
}

} // namespace ck
