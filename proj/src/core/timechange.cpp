#include "core/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/quadrature.hpp"

namespace ck {

double MassModeSum::eval_g(double tau) const
{
    double s = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j)
        s += b[j] * std::expm1(std::max(lam[j] * tau, -745.0));
    return s;
}

double MassModeSum::eval_gprime(double tau) const
{
    double s = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j) {
        const double e = lam[j] * tau;
        if (e > -745.0) s += b[j] * lam[j] * std::exp(e);
    }
    return s;
}

double MassModeSum::g_infinity() const
{
    double s = 0.0;
    for (std::size_t j = 0; j < lam.size(); ++j)
        if (lam[j] < 0.0) s -= b[j];
    return s;
}

MassModeSum mass_mode_sum(const EigenSystem& eig, const Vec& u0_radial,
                          const EquilibriumWeights& wts)
{
    const std::size_t nn = static_cast<std::size_t>(eig.N);
    // m0(tau) = (V^T sqrt(mu))_j (V^T D^{1/2} u0)_j e^{lam_j tau}
    Vec p(nn, 0.0);
    for (std::size_t c = 0; c < nn; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < nn; ++r) s += eig.V[r * nn + c] * eig.sqrt_mu[r];
        p[c] = s;
    }
    Vec q = eig.to_modes(u0_radial);
    MassModeSum ms;
    ms.lam = eig.lam;
    ms.b.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) ms.b[j] = p[j] * q[j];
    return ms;
}

Vec gas_mass_shift(const TrajectoryRecord& traj)
{
    const auto& tr = traj.require(0, 0);
    Vec g(tr.m0.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = tr.m0[i] - tr.m0[0];
    return g;
}

namespace {

// golden-section maximization of modes.eval_g on [a,b]
double golden_max(const MassModeSum& modes, double a, double b, double* arg)
{
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = modes.eval_g(c), fd = modes.eval_g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + b); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = modes.eval_g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = modes.eval_g(d);
        }
    }
    const double m = 0.5 * (a + b);
    if (arg) *arg = m;
    return modes.eval_g(m);
}

} // namespace

Admissibility check_admissibility(double m_c0, const MassModeSum& modes, double n_star,
                                  const Vec& tau_samples)
{
    if (!(m_c0 > 0.0)) throw DomainError("check_admissibility: m_c0 must be positive");
    Admissibility v;
    v.sup_g = 0.0; // g(0) = 0
    v.tau_at_sup = 0.0;
    for (double tau : tau_samples) {
        const double g = modes.eval_g(tau);
        if (g > v.sup_g) {
            v.sup_g = g;
            v.tau_at_sup = tau;
        }
    }
    // refine around interior sign changes of g'
    for (std::size_t i = 1; i + 1 < tau_samples.size(); ++i) {
        const double d0 = modes.eval_gprime(tau_samples[i - 1]);
        const double d1 = modes.eval_gprime(tau_samples[i]);
        if (d0 > 0.0 && d1 < 0.0) {
            double arg = 0.0;
            const double g = golden_max(modes, tau_samples[i - 1], tau_samples[i], &arg);
            if (g > v.sup_g) {
                v.sup_g = g;
                v.tau_at_sup = arg;
            }
        }
    }
    const double ginf = n_star;
    if (ginf > v.sup_g) {
        v.sup_g = ginf;
        v.sup_at_infinity = true;
        v.tau_at_sup = tau_samples.empty() ? 0.0 : tau_samples.back();
    }
    v.margin = m_c0 * m_c0 - 2.0 * v.sup_g;
    v.admissible = v.margin > 0.0;
    v.caveat = std::abs(v.margin) <= 0.01 * m_c0 * m_c0;
    if (!v.admissible) {
        // first tau with m_c0^2 - 2 g(tau) <= 0
        auto depleted = [&](double tau) {
            return m_c0 * m_c0 - 2.0 * modes.eval_g(tau) <= 0.0;
        };
        double lo = 0.0;
        double hi = -1.0;
        for (double tau : tau_samples) {
            if (depleted(tau)) {
                hi = tau;
                break;
            }
            lo = tau;
        }
        if (hi < 0.0) {
            // crossing beyond the sampled horizon (sup approached only
            // asymptotically); grow the bracket on the analytic g
            hi = tau_samples.empty() ? 1.0 : 2.0 * tau_samples.back();
            while (!depleted(hi) && hi < 1e15) {
                lo = hi;
                hi *= 2.0;
            }
            if (!depleted(hi)) {
                // margin <= 0 only in the limit: report the horizon edge
                v.tau_star = hi;
                return v;
            }
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (depleted(mid)) hi = mid;
            else lo = mid;
            if (hi - lo <= 1e-13 * (1.0 + hi)) break;
        }
        v.tau_star = 0.5 * (lo + hi);
    }
    return v;
}

double TimeChangeMap::qc_eval(double tau_) const
{
    const double s = m_c0 * m_c0 - 2.0 * modes.eval_g(tau_);
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

double TimeChangeMap::t_of_tau(double tau_) const
{
    // locate the last sample <= tau_
    auto it = std::upper_bound(tau.begin(), tau.end(), tau_);
    std::size_t idx = (it == tau.begin()) ? 0 : static_cast<std::size_t>(it - tau.begin()) - 1;
    auto f = [this](double s) { return qc_eval(s); };
    if (tau_ <= tau.back()) {
        // fixed two-panel rule: deterministic and smooth in tau_, so the
        // (tiny) quadrature error cancels in finite differences of t(tau)
        const double mid = 0.5 * (tau[idx] + tau_);
        return t[idx] + quad::gk15_fixed(f, tau[idx], mid) + quad::gk15_fixed(f, mid, tau_);
    }
    return t.back() + q_inf * (tau_ - tau.back());
}

double TimeChangeMap::tau_of_t(double t_, bool* extrapolated) const
{
    if (t_ < 0.0) throw DomainError("tau_of_t: t must be nonnegative");
    if (extrapolated) *extrapolated = false;
    if (t_ == 0.0) return 0.0;
    if (t_ > t.back()) {
        if (extrapolated) *extrapolated = true;
        return tau.back() + (t_ - t.back()) / q_inf;
    }
    // bracket on samples, then Newton with derivative q_c
    auto it = std::upper_bound(t.begin(), t.end(), t_);
    std::size_t hi = static_cast<std::size_t>(it - t.begin());
    if (hi >= t.size()) hi = t.size() - 1; // t_ == t.back()
    if (hi == 0) hi = 1;
    std::size_t lo = hi - 1;
    double a = tau[lo], b = tau[hi];
    double ta = t[lo];
    double x = a + (b - a) * ((t_ - ta) / std::max(t[hi] - ta, 1e-300));
    double tx = t_of_tau(x);
    for (int iter = 0; iter < 100; ++iter) {
        const double err = tx - t_;
        if (std::abs(err) <= 1e-14 * (1.0 + std::abs(t_)) || b - a <= 1e-16 * (1.0 + b))
            break;
        const double q = qc_eval(x);
        double step = -err / (q > 1e-300 ? q : 1e-300);
        double xn = x + step;
        if (!(xn > a) || !(xn < b)) xn = 0.5 * (a + b);
        if (tx > t_) b = x;
        else a = x;
        x = xn;
        tx = t_of_tau(x);
    }
    return x;
}

TimeChangeMap build_map(double m_c0, const MassModeSum& modes, double n_star,
                        const Vec& tau_samples)
{
    Admissibility v = check_admissibility(m_c0, modes, n_star, tau_samples);
    if (!v.admissible) {
        std::ostringstream os;
        os << "inadmissible data: m_c0^2 = " << m_c0 * m_c0 << " <= 2 sup g = "
           << 2.0 * v.sup_g << "; q_c reaches 0 at tau* = " << v.tau_star;
        throw InadmissibleError(os.str(), v.tau_star, modes.eval_g(v.tau_star));
    }
    TimeChangeMap map;
    map.m_c0 = m_c0;
    map.n_star = n_star;
    map.q_inf = std::sqrt(m_c0 * m_c0 - 2.0 * n_star);
    map.verdict = v;
    map.modes = modes;
    map.tau = tau_samples;
    const std::size_t n = tau_samples.size();
    map.g.resize(n);
    map.qc.resize(n);
    map.t.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        map.g[i] = modes.eval_g(tau_samples[i]);
        map.qc[i] = std::sqrt(m_c0 * m_c0 - 2.0 * map.g[i]);
    }
    auto f = [&](double s) {
        const double q = m_c0 * m_c0 - 2.0 * modes.eval_g(s);
        return q > 0.0 ? std::sqrt(q) : 0.0;
    };
    map.t[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = tau_samples[i - 1], b = tau_samples[i];
        const double mid = 0.5 * (a + b);
        map.t[i] = map.t[i - 1] + quad::gk15_fixed(f, a, mid) + quad::gk15_fixed(f, mid, b);
        if (!(map.t[i] > map.t[i - 1]))
            throw ConvergenceError("build_map: t(tau) failed to increase strictly");
    }
    return map;
}

ReconstructedRun reconstruct(const EigenSystem& eig, const TimeChangeMap& map,
                             const HarmonicField& u0, const RadialGrid& grid,
                             const EquilibriumWeights& wts, const Vec& t_list,
                             bool keep_profiles)
{
    ReconstructedRun run;
    run.t = t_list;
    const std::size_t nt = t_list.size();
    run.tau.resize(nt);
    run.m_c.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        bool ex = false;
        run.tau[i] = map.tau_of_t(t_list[i], &ex);
        run.any_extrapolated = run.any_extrapolated || ex;
        run.m_c[i] = map.qc_eval(run.tau[i]);
    }
    Vec tau_list = run.tau;
    // reuse the trajectory machinery on the mapped tau values (not a
    // TrajectoryRecord: tau_list here need not start at 0)
    const std::size_t nn = static_cast<std::size_t>(eig.N);
    for (const auto& sec : u0.sectors) {
        ReconstructedRun::Track tr;
        tr.l = sec.l;
        tr.m = sec.m;
        tr.m0.resize(nt);
        tr.m1.resize(nt);
        tr.dist_to_limit.resize(nt);
        if (keep_profiles) tr.profiles.resize(nt);
        double ck = 0.0, kk = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            ck += sec.radial[i] * grid.k[i] * wts.mu[i];
            kk += grid.k[i] * grid.k[i] * wts.mu[i];
        }
        const double climit = ck / kk;
        Vec uinf(nn);
        for (std::size_t i = 0; i < nn; ++i) uinf[i] = climit * grid.k[i];
        Vec x = eig.to_modes(sec.radial);
        Vec xinf = eig.to_modes(uinf);
        parallel_for(nt, [&](std::size_t ti) {
            Vec xt(nn);
            double dist2 = 0.0;
            for (std::size_t c = 0; c < nn; ++c) {
                xt[c] = x[c] * std::exp(std::max(eig.lam[c] * tau_list[ti], -745.0));
                const double d = xt[c] - xinf[c];
                dist2 += d * d;
            }
            Vec prof = eig.from_modes(xt);
            double m0 = 0.0, m1 = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                m0 += prof[i] * wts.mu[i];
                m1 += prof[i] * wts.eta[i];
            }
            tr.m0[ti] = m0;
            tr.m1[ti] = m1;
            tr.dist_to_limit[ti] = std::sqrt(dist2);
            if (keep_profiles) tr.profiles[ti] = std::move(prof);
        });
        run.sectors.push_back(std::move(tr));
    }
    return run;
}

ResidualReport residuals(const EigenSystem& eig, const LinearOperator& op,
                         const RadialGrid& grid, const EquilibriumWeights& wts,
                         const TimeChangeMap& map, const HarmonicField& u0,
                         const GammaTable& gamma_full, double t0, double dt, int n)
{
    if (n < 3) throw DomainError("residuals: need at least 3 samples");
    ResidualReport rep;
    rep.dt = dt;
    rep.t0 = t0;
    rep.samples = n;
    const std::size_t nn = static_cast<std::size_t>(eig.N);

    Vec t_list(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t_list[static_cast<std::size_t>(i)] = t0 + i * dt;
    ReconstructedRun run = reconstruct(eig, map, u0, grid, wts, t_list, true);

    // Gamma-weighted norm ||X||^2 = sum X_i^2 mu_i / Gamma(k_i)
    auto gnorm = [&](const Vec& X) {
        double s = 0.0;
        for (std::size_t i = 0; i < nn; ++i) s += X[i] * X[i] * wts.mu[i] / gamma_full.value[i];
        return std::sqrt(s);
    };

    for (std::size_t sidx = 0; sidx < run.sectors.size(); ++sidx) {
        const auto& tr = run.sectors[sidx];
        const bool is00 = (tr.l == 0 && tr.m == 0);
        for (int i = 1; i + 1 < n; ++i) {
            const std::size_t iu = static_cast<std::size_t>(i);
            const Vec& um = tr.profiles[iu - 1];
            const Vec& uc = tr.profiles[iu];
            const Vec& up = tr.profiles[iu + 1];
            const double mc = run.m_c[iu];
            Vec Au = op.apply(uc);
            if (is00 && sidx == 0) {
                // mass: d m_c/dt + (1/m_c^2) sum rho (A u) = 0, the rate form
                // of the ledger m_c^2 + 2 (dmu mass) = const. The gas moment
                // obeys d(mass)/dt = (1/m_c) sum rho (A u), so one more 1/m_c
                // lands on the exchange term than in the m_c equation as
                // commonly displayed.
                const double dmc = (run.m_c[iu + 1] - run.m_c[iu - 1]) / (2.0 * dt);
                double exch = 0.0;
                for (std::size_t j = 0; j < nn; ++j) exch += Au[j] * wts.rho[j];
                const double res = dmc + exch / (mc * mc);
                rep.r_mass_abs = std::max(rep.r_mass_abs, std::abs(res));
                rep.scale_mass = std::max(rep.scale_mass, std::abs(exch / (mc * mc)));
                // energy: d/dt sum eta u = 0
                double em = 0.0, ep = 0.0;
                for (std::size_t j = 0; j < nn; ++j) {
                    em += um[j] * wts.eta[j];
                    ep += up[j] * wts.eta[j];
                }
                const double eres = (ep - em) / (2.0 * dt);
                rep.r_energy_abs = std::max(rep.r_energy_abs, std::abs(eres));
            }
            // field equation: M du/dt - (1/m_c) A u = 0 in the Gamma-weighted norm
            Vec res(nn);
            for (std::size_t j = 0; j < nn; ++j) {
                const double dudt = (up[j] - um[j]) / (2.0 * dt);
                res[j] = wts.M[j] * dudt - Au[j] / mc;
            }
            Vec rhs(nn);
            for (std::size_t j = 0; j < nn; ++j) rhs[j] = Au[j] / mc;
            rep.r_ode_abs = std::max(rep.r_ode_abs, gnorm(res));
            rep.scale_ode = std::max(rep.scale_ode, gnorm(rhs));
        }
    }
    const double m1scale = std::abs(radial_moment(u0.sectors.front().radial, 1, grid, wts));
    rep.r_mass = rep.scale_mass > 1e-12 * (1.0 + map.m_c0) ? rep.r_mass_abs / rep.scale_mass
                                                           : rep.r_mass_abs;
    rep.r_energy = m1scale > 1e-300 ? rep.r_energy_abs / (1.0 + m1scale) : rep.r_energy_abs;
    rep.r_ode = rep.scale_ode > 1e-300 ? rep.r_ode_abs / rep.scale_ode : rep.r_ode_abs;
    return rep;
}

} // namespace ck
