#include "core/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "core/gamma.hpp"
#include "core/io.hpp"
#include "core/pipeline.hpp"
#include "core/profile.hpp"

namespace ck {

namespace {

constexpr double kPi = 3.14159265358979323846;

// independent series oracle: zeta(s) by partial sum + Euler-Maclaurin tail
double zeta_series(double s)
{
    const int N = 20000;
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) sum += std::pow(n, -s);
    const double Nd = N;
    sum += std::pow(Nd, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(Nd, -s) +
           s / 12.0 * std::pow(Nd, -s - 1.0);
    return sum;
}

struct World {
    RadialGrid grid;
    EquilibriumWeights wts;
    ReductionConstants rc;
    LinearOperator op;
    EigenSystem eig;
    World() : grid(build_grid(40.0, 400)), wts(equilibrium_weights(grid))
    {
        op = assemble_linearized(grid, wts, rc);
        eig = spectral_decompose(op, grid, wts);
    }
    Vec constant(double c) const { return Vec(grid.k.size(), c); }
    HarmonicField field00(const Vec& radial) const
    {
        HarmonicField f;
        Sector s;
        s.l = 0;
        s.m = 0;
        s.radial = radial;
        f.add(std::move(s));
        return f;
    }
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double gross_row_scale(const World& w)
{
    const int N = w.grid.N;
    const double h = w.grid.h;
    double worst = 0.0;
    for (int i = 1; i <= N; ++i) {
        double acc = 0.0;
        const double inv_wi = 1.0 / w.wts.qw[i - 1];
        for (int a = 1; a < i; ++a) {
            const int b = i - a;
            const double s = w.wts.qw[a - 1] * w.wts.qw[b - 1] * w.wts.qw[i - 1] / h;
            acc += 3.0 * (s * inv_wi) * w.grid.k[a - 1] * w.grid.k[a - 1] *
                   w.grid.k[b - 1] * w.grid.k[b - 1] * rho3(w.wts, a, b);
        }
        for (int j = 1; j <= N - i; ++j) {
            const int c = i + j;
            const double s = w.wts.qw[i - 1] * w.wts.qw[j - 1] * w.wts.qw[c - 1] / h;
            acc += 6.0 * (s * inv_wi) * w.grid.k[j - 1] * w.grid.k[j - 1] *
                   w.grid.k[c - 1] * w.grid.k[c - 1] * rho3(w.wts, i, j);
        }
        worst = std::max(worst, acc);
    }
    return worst * w.rc.prefactor();
}

Vec random_vec(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec v(n);
    for (double& x : v) x = u(rng);
    return v;
}

bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b)
{
    std::string ca = io::read_text(a.string());
    std::string cb = io::read_text(b.string());
    return ca == cb;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const std::string& out_dir)
{
    std::vector<CriterionResult> results;
    const std::string base =
        out_dir.empty() ? (std::filesystem::temp_directory_path() / "condkin_selftest").string()
                        : out_dir;
    io::ensure_dir(base);

    World w;
    const double rate_k1 =
        16.0 * w.rc.prefactor() * gamma_paper(0.5 * w.grid.h, 1e-12).value;

    // ---------------------------------------------------------- criterion 1
    {
        CriterionResult r;
        r.id = 1;
        r.name = "Gamma oracles (small-x slope, sub-integral, large-x growth)";
        const double limit = 6.0 * zeta_series(4.0); // pi^4/15
        const double f1 = gamma_paper(1e-2, 1e-12).value / 1e-2;
        const double f2 = gamma_paper(5e-3, 1e-12).value / 5e-3;
        const double f3 = gamma_paper(2.5e-3, 1e-12).value / 2.5e-3;
        const double R1 = (4.0 * f2 - f1) / 3.0;
        const double R2 = (4.0 * f3 - f2) / 3.0;
        const double richardson = (16.0 * R2 - R1) / 15.0;
        const bool ok_slope = std::abs(richardson - limit) <= 1e-6 * limit;
        const double sub = gamma_sub_integral(1e-12).value;
        const double sub_ref = 3.5 * zeta_series(3.0);
        const bool ok_sub = std::abs(sub - sub_ref) <= 1e-8 * sub_ref;
        const double g30 = gamma_paper(30.0, 1e-12).value / std::pow(30.0, 5);
        const bool ok_big = std::abs(g30 - 1.0 / 15.0) <= 0.02 / 15.0;
        r.pass = ok_slope && ok_sub && ok_big;
        r.detail = "Richardson slope " + fmt(richardson) + " vs " + fmt(limit) +
                   "; sub-integral " + fmt(sub) + " vs " + fmt(sub_ref) +
                   "; Gamma(30)/30^5 = " + fmt(g30);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 2
    {
        CriterionResult r;
        r.id = 2;
        r.name = "detailed balance at mu = 0";
        Vec q = q3_radial(w.wts.n0, 1.0, w.grid, w.wts, w.rc);
        double worst = 0.0;
        for (double v : q) worst = std::max(worst, std::abs(v));
        const double scale = gross_row_scale(w);
        r.pass = worst <= 1e-12 * scale;
        r.detail = "max |Q3(n0)| = " + fmt(worst) + ", row scale " + fmt(scale) +
                   ", ratio " + fmt(worst / scale);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 3
    {
        CriterionResult r;
        r.id = 3;
        r.name = "operator structure (symmetry, spectrum sign, kernel, energy column)";
        std::mt19937_64 rng(101);
        double sym_defect = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            Vec F = random_vec(rng, w.grid.k.size());
            Vec G = random_vec(rng, w.grid.k.size());
            const double a = dp_pairing(w.op.apply(F), G, w.wts);
            const double b = dp_pairing(F, w.op.apply(G), w.wts);
            sym_defect = std::max(sym_defect,
                                  std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300));
        }
        const bool ok_sym = sym_defect <= 1e-10;
        const bool ok_sign = w.eig.spurious_positive <= 1e-9 * std::abs(w.eig.lam_min);
        Vec Ak = w.op.apply(w.grid.k);
        double nAk = 0.0, nA = 0.0, nk = 0.0;
        for (double v : Ak) nAk += v * v;
        for (double v : w.op.A) nA += v * v;
        for (double v : w.grid.k) nk += v * v;
        const double kres = std::sqrt(nAk) / (std::sqrt(nA) * std::sqrt(nk));
        const bool ok_kernel = kres <= 1e-10;
        double energy_defect = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            Vec F = random_vec(rng, w.grid.k.size());
            Vec AF = w.op.apply(F);
            double sum = 0.0, absum = 0.0;
            for (std::size_t i = 0; i < F.size(); ++i) {
                const double term = w.grid.k[i] * w.wts.rho[i] * AF[i];
                sum += term;
                absum += std::abs(term);
            }
            energy_defect = std::max(energy_defect, std::abs(sum) / absum);
        }
        const bool ok_energy = energy_defect <= 1e-12;
        r.pass = ok_sym && ok_sign && ok_kernel && ok_energy;
        r.detail = "symmetry " + fmt(sym_defect) + "; lam_max/|lam_min| " +
                   fmt(w.eig.spurious_positive / std::abs(w.eig.lam_min)) + "; kernel " +
                   fmt(kres) + "; energy column " + fmt(energy_defect);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 4
    {
        CriterionResult r;
        r.id = 4;
        r.name = "two-path equivalence (quadratic form, finite-difference linearization)";
        std::mt19937_64 rng(202);
        double qf_dev = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            Vec F = random_vec(rng, w.grid.k.size());
            Vec G = random_vec(rng, w.grid.k.size());
            const double direct = quadratic_form(F, G, w.grid, w.wts, w.rc);
            const double paired = dp_pairing(w.op.apply(F), G, w.wts);
            qf_dev = std::max(qf_dev, std::abs(direct - paired) /
                                          std::max({std::abs(direct), std::abs(paired),
                                                    1e-300}));
        }
        const bool ok_qf = qf_dev <= 1e-9;
        double order_lo = 2.0, order_hi = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            Vec F = random_vec(rng, w.grid.k.size());
            Vec AF = w.op.apply(F);
            const double nAF = norm2(AF);
            Vec errs;
            for (double eps : {1e-2, 1e-3, 1e-4}) {
                Vec n(w.grid.k.size());
                for (std::size_t i = 0; i < n.size(); ++i)
                    n[i] = w.wts.n0[i] + eps * w.wts.M[i] * F[i];
                Vec q1 = q3_radial(n, 1.0, w.grid, w.wts, w.rc);
                double err = 0.0;
                for (std::size_t i = 0; i < n.size(); ++i) {
                    const double d = q1[i] / eps - AF[i];
                    err += d * d;
                }
                errs.push_back(std::sqrt(err) / nAF);
            }
            const double o1 = std::log10(errs[0] / errs[1]);
            const double o2 = std::log10(errs[1] / errs[2]);
            order_lo = std::min({order_lo, o1, o2});
            order_hi = std::max({order_hi, o1, o2});
        }
        const bool ok_order = order_lo >= 0.85 && order_hi <= 1.15;
        r.pass = ok_qf && ok_order;
        r.detail = "form-vs-matrix dev " + fmt(qf_dev) + "; FD order in [" + fmt(order_lo) +
                   ", " + fmt(order_hi) + "]";
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 5
    {
        CriterionResult r;
        r.id = 5;
        r.name = "damping / Gamma(k/2) cross-identification";
        GammaTable half = gamma_table(w.grid, 0.5, 1e-12);
        DampingReport rep = damping_coefficient(w.grid, w.wts, half, w.rc);
        GammaTable full = gamma_table(w.grid, 1.0, 1e-12);
        Vec control = damping_ratio_against(rep, w.wts, full);
        double cmean = 0.0;
        for (double v : control) cmean += v;
        cmean /= static_cast<double>(control.size());
        double cdev = 0.0;
        for (double v : control) cdev = std::max(cdev, std::abs(v / cmean - 1.0));
        r.pass = rep.ratio_max_dev <= 1e-6 && cdev > 0.10;
        r.detail = "ratio const " + fmt(rep.ratio_mean) + " (dev " + fmt(rep.ratio_max_dev) +
                   "); full-argument control drifts " + fmt(cdev);
        // data output: the damping report
        io::Csv csv({"k", "d", "M", "gamma_half", "ratio"});
        for (std::size_t i = 0; i < w.grid.k.size(); ++i)
            csv.row({w.grid.k[i], rep.d[i], w.wts.M[i], rep.gamma_half[i], rep.ratio[i]});
        csv.write(base + "/damping_ratio.csv");
        results.push_back(r);
    }

    // shared pieces for criteria 6..10
    HarmonicField fneg = w.field00(w.constant(-1.0));
    MassModeSum mneg = mass_mode_sum(w.eig, fneg.sectors[0].radial, w.wts);
    AsymptoticState aneg = u_infinity(fneg, w.grid, w.wts);
    Vec taus = geometric_tau(1e-6, 1e4, 16);

    // ---------------------------------------------------------- criterion 6
    {
        CriterionResult r;
        r.id = 6;
        r.name = "conservation ledger and second-order residuals";
        TimeChangeMap map = build_map(10.0, mneg, aneg.n_star, taus);
        Vec tl;
        for (int i = 0; i <= 60; ++i)
            tl.push_back(std::expm1(std::log1p(map.t.back()) * i / 60.0));
        ReconstructedRun run = reconstruct(w.eig, map, fneg, w.grid, w.wts, tl);
        const auto& tr = run.sectors.front();
        double energy_drift = 0.0, ledger_drift = 0.0;
        const double ledger0 = run.m_c[0] * run.m_c[0] + 2.0 * tr.m0[0];
        for (std::size_t i = 0; i < tl.size(); ++i) {
            energy_drift = std::max(energy_drift,
                                    std::abs(tr.m1[i] - tr.m1[0]) / std::abs(tr.m1[0]));
            const double led = run.m_c[i] * run.m_c[i] + 2.0 * tr.m0[i];
            ledger_drift = std::max(ledger_drift, std::abs(led - ledger0) / std::abs(ledger0));
        }
        GammaTable full = gamma_table(w.grid, 1.0, 1e-12);
        // common window starting past the stiff transient of the fastest modes
        const double dt = 1e-3, t0 = 0.2;
        ResidualReport rc_ = residuals(w.eig, w.op, w.grid, w.wts, map, fneg, full, t0, dt, 41);
        ResidualReport rf = residuals(w.eig, w.op, w.grid, w.wts, map, fneg, full, t0,
                                      dt / 2.0, 81);
        const double ratio_mass = rc_.r_mass_abs / rf.r_mass_abs;
        const double ratio_ode = rc_.r_ode_abs / rf.r_ode_abs;
        const bool ok_energy = energy_drift <= 1e-10;
        const bool ok_ledger = ledger_drift <= 1e-10;
        const bool ok_second = ratio_mass >= 3.0 && ratio_mass <= 5.5 && ratio_ode >= 3.0 &&
                               ratio_ode <= 5.5 && rc_.r_energy <= 1e-9;
        r.pass = ok_energy && ok_ledger && ok_second;
        r.detail = "energy drift " + fmt(energy_drift) + "; ledger drift " +
                   fmt(ledger_drift) + "; halving ratios mass " + fmt(ratio_mass) +
                   ", ode " + fmt(ratio_ode);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 7
    {
        CriterionResult r;
        r.id = 7;
        r.name = "time-change machinery (closed form, round trip, stationary)";
        const double lam = -1e-12;
        MassModeSum lin;
        lin.lam = {lam};
        lin.b = {1.0 / lam};
        Vec ts;
        for (int i = 0; i <= 1200; ++i) ts.push_back(i * 1e-3);
        TimeChangeMap map = build_map(2.0, lin, 1.2, ts);
        const double expect = (8.0 - 2.0 * std::sqrt(2.0)) / 3.0;
        const double got = map.t_of_tau(1.0);
        const bool ok_closed = std::abs(got - expect) <= 1e-10;
        // round trip on the relaxation map
        TimeChangeMap mneg_map = build_map(10.0, mneg, aneg.n_star, taus);
        double worst_rt = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double tau = std::pow(10.0, -6.0 + 10.0 * i / 99.0);
            const double t = mneg_map.t_of_tau(tau);
            worst_rt = std::max(worst_rt,
                                std::abs(mneg_map.tau_of_t(t) - tau) / (1.0 + tau));
        }
        const bool ok_rt = worst_rt <= 1e-9;
        // stationary reproduction
        Vec station(w.grid.k.size());
        for (std::size_t i = 0; i < station.size(); ++i) station[i] = 0.3 * w.grid.k[i];
        HarmonicField fst = w.field00(station);
        MassModeSum mst = mass_mode_sum(w.eig, station, w.wts);
        TimeChangeMap smap = build_map(1.0, mst, 0.0, taus);
        Vec tl{0.0, 1.0, 10.0, 100.0};
        ReconstructedRun srun = reconstruct(w.eig, smap, fst, w.grid, w.wts, tl, true);
        double udev = 0.0, mdev = 0.0;
        for (std::size_t i = 0; i < tl.size(); ++i) {
            mdev = std::max(mdev, std::abs(srun.m_c[i] - 1.0));
            for (std::size_t j = 0; j < station.size(); ++j)
                udev = std::max(udev, std::abs(srun.sectors[0].profiles[i][j] - station[j]) /
                                          (1.0 + std::abs(station[j])));
        }
        const bool ok_station = udev <= 1e-10 && mdev <= 1e-10;
        r.pass = ok_closed && ok_rt && ok_station;
        r.detail = "t(1) = " + fmt(got) + " vs " + fmt(expect) + "; round trip " +
                   fmt(worst_rt) + "; stationary dev u " + fmt(udev) + ", m_c " + fmt(mdev);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 8
    {
        CriterionResult r;
        r.id = 8;
        r.name = "algebraic relaxation rate at desk scale";
        Vec u0(w.grid.k.size());
        for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = std::exp(-w.grid.k[i]);
        HarmonicField fd = w.field00(u0);
        AsymptoticState ad = u_infinity(fd, w.grid, w.wts);
        MassModeSum md = mass_mode_sum(w.eig, u0, w.wts);
        TimeChangeMap map = build_map(10.0, md, ad.n_star, taus);
        Vec tl;
        const double t_max = map.t.back();
        for (int i = 0; i < 400; ++i) {
            const double t = std::expm1(std::log1p(t_max) * i / 399.0);
            if (tl.empty() || t > tl.back()) tl.push_back(t);
        }
        ReconstructedRun run = reconstruct(w.eig, map, fd, w.grid, w.wts, tl);
        const auto& tr = run.sectors.front();
        Vec dist = tr.dist_to_limit, gap(tl.size());
        for (std::size_t i = 0; i < tl.size(); ++i)
            gap[i] = std::abs(run.m_c[i] * run.m_c[i] - map.q_inf * map.q_inf);
        DecayFit fit = decay_fit(tl, dist, gap, rate_k1, map.q_inf * map.q_inf,
                                 dist.front());
        // reference power-law slope (log dist vs log tau) on the resolvable
        // algebraic band of the tau flow (0.35..0.53 e-folds of the slowest
        // rate), reported for diagnosis
        double phys_slope = 0.0;
        {
            Vec X, Y;
            for (int i = 0; i < 40; ++i) {
                const double tau = (0.35 + (0.53 - 0.35) * i / 39.0) / rate_k1;
                Vec v = propagate(w.eig, u0, tau);
                double d2 = 0.0;
                for (std::size_t j = 0; j < v.size(); ++j) {
                    const double d = v[j] - ad.u_inf.sectors[0].radial[j];
                    d2 += d * d * w.wts.mu[j];
                }
                X.push_back(std::log(tau));
                Y.push_back(0.5 * std::log(d2));
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(X.size());
            for (std::size_t i = 0; i < X.size(); ++i) {
                sx += X[i];
                sy += Y[i];
                sxx += X[i] * X[i];
                sxy += X[i] * Y[i];
            }
            phys_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        const bool ok_fit = fit.status == DecayFit::Status::Ok &&
                            fit.slope_u >= -0.55 && fit.slope_u <= -0.45;
        const bool ok_mc = fit.status == DecayFit::Status::Ok && fit.slope_mc <= -0.45;
        const bool ok_bound = fit.bound_holds;
        r.pass = ok_fit && ok_mc && ok_bound;
        std::ostringstream det;
        det << "trusted window [1, " << fmt(0.1 / rate_k1) << "] status=" <<
            (fit.status == DecayFit::Status::Ok ? "ok"
             : fit.status == DecayFit::Status::Stationary ? "stationary"
                                                          : "window_too_short");
        if (fit.status == DecayFit::Status::Ok)
            det << " slope_u=" << fmt(fit.slope_u) << " slope_mc=" << fmt(fit.slope_mc)
                << " bound=" << (fit.bound_holds ? "holds" : "violated");
        det << "; tau-power reference slope " << fmt(phys_slope)
            << " on the band [0.35,0.53]/rate(k_1) (the t^{-1/2} law is present"
               " there, but the trusted window needs k_1 far below the data"
               " scale and lies before the band at this resolution)";
        r.detail = det.str();
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 9
    {
        CriterionResult r;
        r.id = 9;
        r.name = "asymptotic condensate mass and moment oracles";
        const double pi4 = 4.0 * kPi;
        double smu = 0.0, seta = 0.0, sk2 = 0.0;
        for (std::size_t i = 0; i < w.grid.k.size(); ++i) {
            smu += w.wts.mu[i];
            seta += w.wts.eta[i];
            sk2 += w.wts.k2mu[i];
        }
        const double ref0 = pi4 * 2.0 * zeta_series(2.0);
        const double ref1 = pi4 * 6.0 * zeta_series(3.0);
        const double ref2 = pi4 * 24.0 * zeta_series(4.0);
        const bool ok_m0 = std::abs(smu - ref0) <= 1e-6 * ref0;
        const bool ok_m1 = std::abs(seta - ref1) <= 1e-6 * ref1;
        const bool ok_m2 = std::abs(sk2 - ref2) <= 1e-6 * ref2;
        TimeChangeMap map = build_map(10.0, mneg, aneg.n_star, taus);
        Vec tl{map.t.back()};
        ReconstructedRun run = reconstruct(w.eig, map, fneg, w.grid, w.wts, tl);
        const double target = std::sqrt(100.0 - 2.0 * aneg.n_star);
        const bool ok_mc = std::abs(run.m_c.back() - target) <= 0.01 * target;
        r.pass = ok_m0 && ok_m1 && ok_m2 && ok_mc;
        r.detail = "moments (" + fmt(smu) + ", " + fmt(seta) + ", " + fmt(sk2) +
                   ") vs oracles (" + fmt(ref0) + ", " + fmt(ref1) + ", " + fmt(ref2) +
                   "); m_c(t_max) = " + fmt(run.m_c.back()) + " vs " + fmt(target) +
                   " (N_* = " + fmt(aneg.n_star) + ")";
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 10
    {
        CriterionResult r;
        r.id = 10;
        r.name = "admissibility necessity (threshold bracket, graceful breakdown)";
        DepletionScan scan = depletion_scan(mneg, aneg.n_star, taus, 1.0, 12.0, 1e-4);
        const bool ok_thr = std::abs(scan.threshold * scan.threshold - 2.0 * scan.sup_g) <=
                            1e-3 * 2.0 * scan.sup_g;
        // below threshold: the pipeline reports breakdown instead of crashing
        RunConfig cfg = parse_config(builtin_config("depletion"));
        cfg.plots = false;
        RunReport rpt = run_pipeline(cfg, base + "/run_depletion", Stage::All);
        const bool ok_bdown = rpt.breakdown && std::isfinite(rpt.tau_star) &&
                              rpt.tau_star > 0.0;
        r.pass = ok_thr && ok_bdown;
        r.detail = "threshold " + fmt(scan.threshold) + " vs sqrt(2 sup g) = " +
                   fmt(std::sqrt(2.0 * scan.sup_g)) + "; breakdown at tau* = " +
                   fmt(rpt.tau_star);
        results.push_back(r);
    }

    // ---------------------------------------------------------- criterion 11
    {
        CriterionResult r;
        r.id = 11;
        r.name = "determinism: byte-identical data outputs";
        bool identical = true;
        std::string first_diff;
        for (const char* name : {"stationary", "decay"}) {
            RunConfig cfg = parse_config(builtin_config(name));
            const std::string da = base + "/det_a_" + name;
            const std::string db = base + "/det_b_" + name;
            RunReport ra = run_pipeline(cfg, da, Stage::All);
            RunReport rb = run_pipeline(cfg, db, Stage::All);
            (void)ra;
            for (const auto& f : rb.files) {
                if (!files_identical(da + "/" + f, db + "/" + f)) {
                    identical = false;
                    if (first_diff.empty()) first_diff = std::string(name) + "/" + f;
                }
            }
        }
        r.pass = identical;
        r.detail = identical ? "all data files byte-identical across repeated runs"
                             : ("first differing file: " + first_diff);
        results.push_back(r);
    }

    return results;
}

} // namespace ck
