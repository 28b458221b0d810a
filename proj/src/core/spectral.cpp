#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ck {

void jacobi_eigh(std::vector<double>& S, int n, Vec& lam, std::vector<double>& V,
                 double tol, int max_sweeps)
{
    const std::size_t nn = static_cast<std::size_t>(n);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return S[i * nn + j]; };
    V.assign(nn * nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) V[i * nn + i] = 1.0;

    double norm = 0.0;
    for (double v : S) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        lam.assign(nn, 0.0);
        return;
    }
    const double stop = tol * norm;

    auto offnorm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = i + 1; j < nn; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    double off = offnorm();
    while (off > stop) {
        if (++sweep > max_sweeps) {
            std::ostringstream os;
            os << "jacobi_eigh: off-diagonal residual " << off << " above " << stop
               << " after " << max_sweeps << " sweeps";
            throw ConvergenceError(os.str());
        }
        for (std::size_t p = 0; p < nn; ++p) {
            for (std::size_t q = p + 1; q < nn; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau_ = s / (1.0 + c);
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (std::size_t r = 0; r < nn; ++r) {
                    if (r != p && r != q) {
                        const double arp = at(r, p), arq = at(r, q);
                        at(r, p) = arp - s * (arq + tau_ * arp);
                        at(p, r) = at(r, p);
                        at(r, q) = arq + s * (arp - tau_ * arq);
                        at(q, r) = at(r, q);
                    }
                    const double vrp = V[r * nn + p], vrq = V[r * nn + q];
                    V[r * nn + p] = vrp - s * (vrq + tau_ * vrp);
                    V[r * nn + q] = vrq + s * (vrp - tau_ * vrq);
                }
            }
        }
        off = offnorm();
    }
    lam.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) lam[i] = at(i, i);
    // sort ascending by eigenvalue, reorder columns
    std::vector<std::size_t> idx(nn);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return lam[a] < lam[b]; });
    Vec lam2(nn);
    std::vector<double> V2(nn * nn);
    for (std::size_t c2 = 0; c2 < nn; ++c2) {
        lam2[c2] = lam[idx[c2]];
        for (std::size_t r = 0; r < nn; ++r) V2[r * nn + c2] = V[r * nn + idx[c2]];
    }
    lam.swap(lam2);
    V.swap(V2);
}

EigenSystem spectral_decompose(const LinearOperator& op, const RadialGrid& grid,
                               const EquilibriumWeights& wts, double tol)
{
    const int N = op.N;
    const std::size_t nn = static_cast<std::size_t>(N);
    EigenSystem eig;
    eig.N = N;
    eig.sqrt_mu.resize(nn);
    eig.inv_sqrt_mu.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        eig.sqrt_mu[i] = std::sqrt(wts.mu[i]);
        eig.inv_sqrt_mu[i] = 1.0 / eig.sqrt_mu[i];
    }
    // khat = normalized D^{1/2} k
    eig.khat.resize(nn);
    double kn = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        eig.khat[i] = eig.sqrt_mu[i] * grid.k[i];
        kn += eig.khat[i] * eig.khat[i];
    }
    kn = std::sqrt(kn);
    for (double& v : eig.khat) v /= kn;

    // S = D^{1/2} M^{-1} A D^{-1/2}, then exact deflation S <- P S P
    std::vector<double> S(nn * nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const double li = eig.sqrt_mu[i] / wts.M[i];
        for (std::size_t j = 0; j < nn; ++j)
            S[i * nn + j] = li * op.A[i * nn + j] * eig.inv_sqrt_mu[j];
    }
    // force exact symmetry before deflation (construction leaves ~1e-16 skew)
    for (std::size_t i = 0; i < nn; ++i)
        for (std::size_t j = i + 1; j < nn; ++j) {
            const double m = 0.5 * (S[i * nn + j] + S[j * nn + i]);
            S[i * nn + j] = m;
            S[j * nn + i] = m;
        }
    // P S P with P = I - khat khat^T
    {
        Vec Sk(nn, 0.0);
        for (std::size_t i = 0; i < nn; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < nn; ++j) s += S[i * nn + j] * eig.khat[j];
            Sk[i] = s;
        }
        double kSk = 0.0;
        for (std::size_t i = 0; i < nn; ++i) kSk += eig.khat[i] * Sk[i];
        for (std::size_t i = 0; i < nn; ++i)
            for (std::size_t j = 0; j < nn; ++j)
                S[i * nn + j] += -Sk[i] * eig.khat[j] - eig.khat[i] * Sk[j] +
                                 kSk * eig.khat[i] * eig.khat[j];
    }

    std::vector<double> Swork = S;
    jacobi_eigh(Swork, N, eig.lam, eig.V, tol);

    // locate kernel column (largest overlap with khat), clamp positives
    std::size_t kcol = 0;
    double best = -1.0;
    for (std::size_t c = 0; c < nn; ++c) {
        double ov = 0.0;
        for (std::size_t r = 0; r < nn; ++r) ov += eig.V[r * nn + c] * eig.khat[r];
        if (std::abs(ov) > best) {
            best = std::abs(ov);
            kcol = c;
        }
    }
    eig.kernel_cosine = best;
    eig.lam[kcol] = 0.0;
    double lam_min_pre = 0.0;
    for (double l : eig.lam) lam_min_pre = std::min(lam_min_pre, l);
    for (std::size_t c = 0; c < nn; ++c)
        if (c != kcol) eig.spurious_positive = std::max(eig.spurious_positive, eig.lam[c]);
    if (eig.spurious_positive > 1e-6 * std::abs(lam_min_pre))
        throw ConvergenceError("spectral_decompose: genuine positive eigenvalue " +
                               std::to_string(eig.spurious_positive));
    for (double& l : eig.lam) l = std::min(l, 0.0);

    // order descending (kernel first), deterministic
    std::vector<std::size_t> idx(nn);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return eig.lam[a] > eig.lam[b]; });
    Vec lam2(nn);
    std::vector<double> V2(nn * nn);
    for (std::size_t c = 0; c < nn; ++c) {
        lam2[c] = eig.lam[idx[c]];
        double sign = 0.0;
        double amax = 0.0;
        for (std::size_t r = 0; r < nn; ++r) {
            const double v = eig.V[r * nn + idx[c]];
            if (std::abs(v) > amax) {
                amax = std::abs(v);
                sign = v >= 0.0 ? 1.0 : -1.0;
            }
        }
        if (sign == 0.0) sign = 1.0;
        for (std::size_t r = 0; r < nn; ++r) V2[r * nn + c] = sign * eig.V[r * nn + idx[c]];
    }
    eig.lam.swap(lam2);
    eig.V.swap(V2);

    eig.lam_min = eig.lam.back();
    eig.lam_gap = nn > 1 ? -eig.lam[1] : 0.0;

    // reconstruction residual in Frobenius norm
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = 0; j < nn; ++j) {
            double r = 0.0;
            for (std::size_t c = 0; c < nn; ++c)
                r += eig.V[i * nn + c] * eig.lam[c] * eig.V[j * nn + c];
            const double d = S[i * nn + j] - r;
            num += d * d;
            den += S[i * nn + j] * S[i * nn + j];
        }
    }
    eig.offdiag_residual = std::sqrt(num / (den > 0 ? den : 1.0));
    return eig;
}

Vec EigenSystem::to_modes(const Vec& F) const
{
    const std::size_t nn = static_cast<std::size_t>(N);
    Vec y(nn), x(nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) y[i] = sqrt_mu[i] * F[i];
    for (std::size_t c = 0; c < nn; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < nn; ++r) s += V[r * nn + c] * y[r];
        x[c] = s;
    }
    return x;
}

Vec EigenSystem::from_modes(const Vec& x) const
{
    const std::size_t nn = static_cast<std::size_t>(N);
    Vec F(nn, 0.0);
    for (std::size_t r = 0; r < nn; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < nn; ++c) s += V[r * nn + c] * x[c];
        F[r] = inv_sqrt_mu[r] * s;
    }
    return F;
}

Vec propagate(const EigenSystem& eig, const Vec& F0, double tau)
{
    if (tau < 0.0) throw DomainError("propagate: tau must be nonnegative");
    Vec x = eig.to_modes(F0);
    for (std::size_t c = 0; c < x.size(); ++c) x[c] *= std::exp(eig.lam[c] * tau);
    return eig.from_modes(x);
}

const TrajectoryRecord::SectorTrack& TrajectoryRecord::require(int l, int m) const
{
    for (const auto& s : sectors)
        if (s.l == l && s.m == m) return s;
    std::ostringstream os;
    os << "trajectory has no sector (" << l << "," << m << ")";
    throw DomainError(os.str());
}

TrajectoryRecord trajectory(const EigenSystem& eig, const HarmonicField& F0,
                            const RadialGrid& grid, const EquilibriumWeights& wts,
                            const Vec& tau_list, bool keep_profiles)
{
    for (std::size_t i = 1; i < tau_list.size(); ++i)
        if (!(tau_list[i] > tau_list[i - 1]))
            throw DomainError("trajectory: tau samples must be increasing");
    if (!tau_list.empty() && tau_list.front() != 0.0)
        throw DomainError("trajectory: tau samples must start at 0");

    TrajectoryRecord rec;
    rec.tau = tau_list;
    const std::size_t nt = tau_list.size();
    const std::size_t nn = static_cast<std::size_t>(eig.N);
    for (const auto& sec : F0.sectors) {
        TrajectoryRecord::SectorTrack tr;
        tr.l = sec.l;
        tr.m = sec.m;
        tr.m0.resize(nt);
        tr.m1.resize(nt);
        tr.dist_to_limit.resize(nt);
        if (keep_profiles) tr.profiles.resize(nt);

        // limit = D-orthogonal projection onto the kernel mode k
        double ck = 0.0, kk = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            ck += sec.radial[i] * grid.k[i] * wts.mu[i];
            kk += grid.k[i] * grid.k[i] * wts.mu[i];
        }
        const double climit = ck / kk;
        Vec x = eig.to_modes(sec.radial);
        // distance-to-limit uses the kernel-free part
        Vec xinf(nn, 0.0);
        {
            Vec uinf(nn);
            for (std::size_t i = 0; i < nn; ++i) uinf[i] = climit * grid.k[i];
            xinf = eig.to_modes(uinf);
        }
        parallel_for(nt, [&](std::size_t t) {
            Vec xt(nn);
            double dist2 = 0.0;
            for (std::size_t c = 0; c < nn; ++c) {
                xt[c] = x[c] * std::exp(eig.lam[c] * rec.tau[t]);
                const double d = xt[c] - xinf[c];
                dist2 += d * d;
            }
            Vec prof = eig.from_modes(xt);
            double m0 = 0.0, m1 = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                m0 += prof[i] * wts.mu[i];
                m1 += prof[i] * wts.eta[i];
            }
            tr.m0[t] = m0;
            tr.m1[t] = m1;
            tr.dist_to_limit[t] = std::sqrt(dist2);
            if (keep_profiles) tr.profiles[t] = std::move(prof);
        });
        rec.sectors.push_back(std::move(tr));
    }
    return rec;
}

Vec implicit_trapezoid(const LinearOperator& op, const EquilibriumWeights& wts,
                       const Vec& F0, double dtau, int nsteps)
{
    const int N = op.N;
    const std::size_t nn = static_cast<std::size_t>(N);
    // Build I -/+ (dtau/2) M^{-1} A
    std::vector<double> lhs(nn * nn), rhs(nn * nn);
    for (std::size_t i = 0; i < nn; ++i) {
        const double mi = 0.5 * dtau / wts.M[i];
        for (std::size_t j = 0; j < nn; ++j) {
            const double a = op.A[i * nn + j];
            lhs[i * nn + j] = (i == j ? 1.0 : 0.0) - mi * a;
            rhs[i * nn + j] = (i == j ? 1.0 : 0.0) + mi * a;
        }
    }
    // LU with partial pivoting
    std::vector<int> piv(nn);
    for (std::size_t c = 0; c < nn; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < nn; ++r)
            if (std::abs(lhs[r * nn + c]) > std::abs(lhs[p * nn + c])) p = r;
        piv[c] = static_cast<int>(p);
        if (p != c)
            for (std::size_t j = 0; j < nn; ++j) std::swap(lhs[c * nn + j], lhs[p * nn + j]);
        const double d = lhs[c * nn + c];
        for (std::size_t r = c + 1; r < nn; ++r) {
            const double f = lhs[r * nn + c] / d;
            lhs[r * nn + c] = f;
            for (std::size_t j = c + 1; j < nn; ++j) lhs[r * nn + j] -= f * lhs[c * nn + j];
        }
    }
    auto solve = [&](Vec& b) {
        for (std::size_t c = 0; c < nn; ++c) {
            if (piv[c] != static_cast<int>(c)) std::swap(b[c], b[static_cast<std::size_t>(piv[c])]);
            for (std::size_t r = c + 1; r < nn; ++r) b[r] -= lhs[r * nn + c] * b[c];
        }
        for (std::size_t c = nn; c-- > 0;) {
            for (std::size_t j = c + 1; j < nn; ++j) b[c] -= lhs[c * nn + j] * b[j];
            b[c] /= lhs[c * nn + c];
        }
    };
    Vec F = F0;
    Vec b(nn);
    for (int s = 0; s < nsteps; ++s) {
        for (std::size_t i = 0; i < nn; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < nn; ++j) acc += rhs[i * nn + j] * F[j];
            b[i] = acc;
        }
        solve(b);
        F = b;
    }
    return F;
}

Vec geometric_tau(double tau_min, double tau_max, int per_decade)
{
    if (!(tau_min > 0.0) || !(tau_max > tau_min))
        throw ConfigError("tau sampling requires 0 < tau_min < tau_max");
    if (per_decade < 2) throw ConfigError("samples_per_decade must be at least 2");
    Vec out{0.0};
    const double lg0 = std::log10(tau_min);
    const double lg1 = std::log10(tau_max);
    const int n = static_cast<int>(std::ceil((lg1 - lg0) * per_decade));
    for (int i = 0; i <= n; ++i) {
        const double lg = lg0 + (lg1 - lg0) * i / n;
        out.push_back(std::pow(10.0, lg));
    }
    out.back() = tau_max;
    return out;
}

} // namespace ck
