#include "core/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ck {

AsymptoticState u_infinity(const HarmonicField& u0, const RadialGrid& grid,
                           const EquilibriumWeights& wts)
{
    AsymptoticState st;
    double kk = 0.0;
    for (std::size_t i = 0; i < grid.k.size(); ++i) kk += grid.k[i] * grid.k[i] * wts.mu[i];
    for (const auto& sec : u0.sectors) {
        AsymptoticState::SectorCoef sc;
        sc.l = sec.l;
        sc.m = sec.m;
        double fk = 0.0, f1 = 0.0;
        for (std::size_t i = 0; i < grid.k.size(); ++i) {
            fk += sec.radial[i] * grid.k[i] * wts.mu[i];
            f1 += sec.radial[i] * wts.mu[i];
        }
        sc.c = fk / kk;
        sc.c_literal = f1;
        st.coefs.push_back(sc);
        Sector lim;
        lim.l = sec.l;
        lim.m = sec.m;
        lim.radial.resize(grid.k.size());
        for (std::size_t i = 0; i < grid.k.size(); ++i) lim.radial[i] = sc.c * grid.k[i];
        st.u_inf.add(std::move(lim));
    }
    st.n_star = n_star(u0, st, grid, wts);
    return st;
}

double n_star(const HarmonicField& u0, const AsymptoticState& state,
              const RadialGrid& grid, const EquilibriumWeights& wts)
{
    const Sector* s0 = u0.find(0, 0);
    if (!s0) return 0.0;
    const Sector& sinf = state.u_inf.require(0, 0);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.k.size(); ++i)
        s += (sinf.radial[i] - s0->radial[i]) * wts.mu[i];
    return s;
}

namespace {

double ls_slope(const Vec& x, const Vec& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

DecayFit decay_fit(const Vec& t, const Vec& dist, const Vec& mc_sq_gap, double rate_k1,
                   double qinf_sq, double dist0)
{
    DecayFit fit;
    fit.t_lo = 1.0;
    fit.t_hi = 0.1 / rate_k1;
    if (dist0 <= 1e-13) {
        fit.status = DecayFit::Status::Stationary;
        fit.message = "stationary data: distance to the limit vanishes, fit skipped";
        return fit;
    }
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= fit.t_lo && t[i] <= fit.t_hi && dist[i] > 0.0) sel.push_back(i);
    fit.points = static_cast<int>(sel.size());
    fit.window_spans_two_decades =
        fit.t_hi / fit.t_lo >= 100.0 && fit.points >= 8;
    if (fit.t_hi <= fit.t_lo || fit.points < 8) {
        fit.status = DecayFit::Status::WindowTooShort;
        std::ostringstream os;
        os << "trusted window [" << fit.t_lo << ", " << fit.t_hi
           << "] too short at this resolution (" << fit.points
           << " samples); increase N (smaller k_1 = k_max/N extends the window)";
        fit.message = os.str();
        return fit;
    }
    Vec X, Yu, Ym;
    for (std::size_t i : sel) {
        X.push_back(std::log1p(t[i]));
        Yu.push_back(std::log(dist[i]));
        if (!mc_sq_gap.empty() && mc_sq_gap[i] > 0.0) Ym.push_back(std::log(mc_sq_gap[i]));
    }
    fit.slope_u = ls_slope(X, Yu);
    if (Ym.size() == X.size()) fit.slope_mc = ls_slope(X, Ym);
    else fit.slope_mc = std::numeric_limits<double>::quiet_NaN();
    // fitted constant and pointwise bound check on/after the window
    double c = 0.0;
    for (std::size_t i : sel) c = std::max(c, dist[i] * std::sqrt(1.0 + t[i] / qinf_sq));
    fit.C_fit = c;
    fit.bound_holds = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < fit.t_lo) continue;
        if (dist[i] > fit.C_fit / std::sqrt(1.0 + t[i] / qinf_sq) * (1.0 + 1e-12)) {
            fit.bound_holds = false;
            break;
        }
    }
    return fit;
}

SmallkNorm weighted_smallk_norm(const std::function<double(double)>& u0,
                                const RadialGrid& grid)
{
    // plain trapezoid over (0, 1]: the boundary-closure stencil spans k <= 16 h
    // and must not be cut by the |p| < 1 truncation, and the final partial
    // panel up to k = 1 is closed explicitly so the value is comparable
    // across refinements
    auto density = [&u0](double k) {
        const double sh = std::sinh(0.5 * k);
        const double f = u0(k);
        return f * f * 4.0 * M_PI * k * k / (4.0 * sh * sh) / k;
    };
    auto eval = [&](const RadialGrid& g) {
        double s = 0.0;
        double klast = 0.0;
        for (std::size_t i = 0; i < g.k.size(); ++i) {
            if (g.k[i] >= 1.0) break;
            s += density(g.k[i]) * g.h;
            klast = g.k[i];
        }
        if (klast > 0.0 && klast < 1.0)
            s += 0.5 * (1.0 - klast) * (density(klast) + density(1.0));
        return s;
    };
    SmallkNorm out;
    out.value = eval(grid);
    RadialGrid fine = build_grid(grid.k_max, 2 * grid.N);
    out.value_fine = eval(fine);
    const double scale = std::max(std::abs(out.value), std::abs(out.value_fine));
    out.marginal = scale > 0.0 && (out.value_fine - out.value) > 0.05 * scale;
    return out;
}

DepletionScan depletion_scan(const MassModeSum& modes, double n_star_value,
                             const Vec& tau_samples, double m_lo, double m_hi,
                             double rel_tol)
{
    DepletionScan scan;
    Admissibility probe = check_admissibility(std::max(m_hi, 1.0), modes, n_star_value,
                                              tau_samples);
    scan.sup_g = probe.sup_g;
    if (scan.sup_g <= 1e-13) {
        scan.stationary = true;
        return scan;
    }
    auto verdict = [&](double m) {
        Admissibility v = check_admissibility(m, modes, n_star_value, tau_samples);
        DepletionScan::Row row;
        row.m_c0 = m;
        row.admissible = v.admissible;
        row.margin_or_tau_star = v.admissible ? v.margin : v.tau_star;
        scan.rows.push_back(row);
        return v.admissible;
    };
    bool lo_ok = verdict(m_lo);
    bool hi_ok = verdict(m_hi);
    if (lo_ok || !hi_ok) {
        std::ostringstream os;
        os << "depletion_scan: range [" << m_lo << ", " << m_hi
           << "] does not bracket the threshold; measured sup g = " << scan.sup_g
           << " (threshold m_c0* = " << std::sqrt(2.0 * scan.sup_g) << ")";
        throw DomainError(os.str());
    }
    double lo = m_lo, hi = m_hi;
    while ((hi * hi - lo * lo) > rel_tol * 2.0 * scan.sup_g) {
        const double mid = 0.5 * (lo + hi);
        if (verdict(mid)) hi = mid;
        else lo = mid;
    }
    scan.threshold = 0.5 * (lo + hi);
    return scan;
}

} // namespace ck
