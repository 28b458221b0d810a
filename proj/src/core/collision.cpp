#include "core/collision.hpp"

#include <cmath>
#include <sstream>

#include "core/quadrature.hpp"

namespace ck {

Vec LinearOperator::apply(const Vec& F) const
{
    Vec out(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        const double* row = &A[static_cast<std::size_t>(i) * static_cast<std::size_t>(N)];
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += row[j] * F[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

LinearOperator assemble_linearized(const RadialGrid& grid, const EquilibriumWeights& wts,
                                   const ReductionConstants& constants)
{
    const int N = grid.N;
    const double h = grid.h;
    const double c = constants.prefactor();
    LinearOperator op;
    op.N = N;
    op.constants = constants;
    op.A.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0.0);
    op.damping_grid.assign(static_cast<std::size_t>(N), 0.0);
    const Vec& k = grid.k;
    const Vec& qw = wts.qw;

    parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
        const int i = static_cast<int>(row) + 1;
        double* Ai = &op.A[row * static_cast<std::size_t>(N)];
        const double inv_wi = 1.0 / qw[row];
        double damp = 0.0;
        // coalescence into k_i: pairs (a, i-a)
        for (int a = 1; a < i; ++a) {
            const int b = i - a;
            const double s = qw[a - 1] * qw[b - 1] * qw[i - 1] / h;
            const double W = c * (s * inv_wi) * k[a - 1] * k[a - 1] * k[b - 1] * k[b - 1] *
                             rho3(wts, a, b);
            Ai[a - 1] += W;
            Ai[b - 1] += W;
            Ai[i - 1] -= W;
            damp += W;
        }
        // exchange with partner k_j: k_i + k_j = k_{i+j}
        for (int j = 1; j <= N - i; ++j) {
            const int cc = i + j;
            const double s = qw[i - 1] * qw[j - 1] * qw[cc - 1] / h;
            const double W = 2.0 * c * (s * inv_wi) * k[j - 1] * k[j - 1] * k[cc - 1] *
                             k[cc - 1] * rho3(wts, i, j);
            Ai[cc - 1] += W;
            Ai[i - 1] -= W;
            Ai[j - 1] -= W;
            damp += W;
        }
        op.damping_grid[row] = damp;
    });
    return op;
}

Vec q3_radial(const Vec& n, double n_c, const RadialGrid& grid,
              const EquilibriumWeights& wts, const ReductionConstants& constants)
{
    const int N = grid.N;
    if (static_cast<int>(n.size()) != N) throw DomainError("q3_radial: size mismatch");
    if (!(n_c > 0.0)) throw DomainError("q3_radial: n_c must be positive");
    {
        std::ostringstream bad;
        bool any = false;
        for (int i = 0; i < N; ++i) {
            const double v = n[static_cast<std::size_t>(i)];
            if (!(v >= 0.0) || !std::isfinite(v)) {
                if (any) bad << ", ";
                bad << (i + 1);
                any = true;
            }
        }
        if (any)
            throw DomainError("q3_radial: negative or non-finite density at nodes " + bad.str());
    }
    ReductionConstants rc = constants;
    rc.n_c = n_c;
    const double c = rc.prefactor();
    const double h = grid.h;
    const Vec& k = grid.k;
    const Vec& qw = wts.qw;
    auto B = [&n](int a, int b, int cc) {
        const double na = n[static_cast<std::size_t>(a) - 1];
        const double nb = n[static_cast<std::size_t>(b) - 1];
        const double ncc = n[static_cast<std::size_t>(cc) - 1];
        return na * nb * (1.0 + ncc) - (1.0 + na) * (1.0 + nb) * ncc;
    };
    Vec out(static_cast<std::size_t>(N), 0.0);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
        const int i = static_cast<int>(row) + 1;
        const double inv_wi = 1.0 / qw[row];
        double acc = 0.0;
        for (int a = 1; a < i; ++a) {
            const int b = i - a;
            const double s = qw[a - 1] * qw[b - 1] * qw[i - 1] / h;
            acc += (s * inv_wi) * k[a - 1] * k[a - 1] * k[b - 1] * k[b - 1] * B(a, b, i);
        }
        for (int j = 1; j <= N - i; ++j) {
            const int cc = i + j;
            const double s = qw[i - 1] * qw[j - 1] * qw[cc - 1] / h;
            acc -= 2.0 * (s * inv_wi) * k[j - 1] * k[j - 1] * k[cc - 1] * k[cc - 1] *
                   B(i, j, cc);
        }
        out[row] = c * acc;
    });
    return out;
}

double quadratic_form(const Vec& F, const Vec& G, const RadialGrid& grid,
                      const EquilibriumWeights& wts, const ReductionConstants& constants)
{
    const int N = grid.N;
    const double h = grid.h;
    const Vec& k = grid.k;
    const Vec& qw = wts.qw;
    double total = 0.0;
    for (int a = 1; a <= N - 1; ++a) {
        double rowsum = 0.0;
        for (int b = 1; b <= N - a; ++b) {
            const int cc = a + b;
            const double s = qw[a - 1] * qw[b - 1] * qw[cc - 1] / h;
            const double W = s * k[a - 1] * k[a - 1] * k[b - 1] * k[b - 1] * k[cc - 1] *
                             k[cc - 1] * rho3(wts, a, b);
            const double TF = F[static_cast<std::size_t>(a) - 1] +
                              F[static_cast<std::size_t>(b) - 1] -
                              F[static_cast<std::size_t>(cc) - 1];
            const double TG = G[static_cast<std::size_t>(a) - 1] +
                              G[static_cast<std::size_t>(b) - 1] -
                              G[static_cast<std::size_t>(cc) - 1];
            rowsum += W * TF * TG;
        }
        total += rowsum;
    }
    return -4.0 * M_PI * constants.prefactor() * total;
}

double dp_pairing(const Vec& X, const Vec& Y, const EquilibriumWeights& wts)
{
    double s = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) s += X[i] * Y[i] * wts.rho[i];
    return s;
}

DampingReport damping_coefficient(const RadialGrid& grid, const EquilibriumWeights& wts,
                                  const GammaTable& half_table,
                                  const ReductionConstants& constants)
{
    if (half_table.scale != 0.5)
        throw DomainError("damping_coefficient: expected the half-argument Gamma table");
    const std::size_t N = grid.k.size();
    const double c = constants.prefactor();
    DampingReport rep;
    rep.d.resize(N);
    rep.gamma_half = half_table.value;
    rep.ratio.resize(N);
    parallel_for(N, [&](std::size_t idx) {
        const double k = grid.k[idx];
        const double shk = wts.sh[idx]; // sinh(k/2)
        // coalescence damping integral: int_0^k k1^2 (k-k1)^2 rho3(k1, k-k1) dk1
        auto fc = [k, shk](double k1) {
            if (k1 <= 0.0 || k1 >= k) return 0.0;
            const double k2 = k - k1;
            const double r = 1.0 / (8.0 * std::sinh(0.5 * k1) * std::sinh(0.5 * k2) * shk);
            return k1 * k1 * k2 * k2 * r;
        };
        // exchange damping integral (doubled): 2 int_0^inf k1^2 (k+k1)^2 rho3(k,k1) dk1
        auto fx = [k, shk](double k1) {
            if (k1 <= 0.0) return 0.0;
            const double kc = k + k1;
            // rho3(k,k1) with overflow-safe ratios: 1/(8 sinh(k/2) sinh(k1/2) sinh(kc/2))
            const double r = 1.0 / (8.0 * shk * std::sinh(0.5 * k1) * std::sinh(0.5 * kc));
            return 2.0 * k1 * k1 * kc * kc * r;
        };
        quad::Result rc_ = quad::integrate(fc, 0.0, k, 1e-12);
        quad::Result rx = quad::integrate_panels(fx, {0.0, 5.0, 30.0, 120.0}, 1e-12);
        rep.d[idx] = c * (rc_.value + rx.value);
        rep.ratio[idx] = rep.d[idx] / (wts.M[idx] * rep.gamma_half[idx]);
    });
    double mean = 0.0;
    for (double r : rep.ratio) mean += r;
    mean /= static_cast<double>(N);
    rep.ratio_mean = mean;
    double dev = 0.0;
    for (double r : rep.ratio) dev = std::max(dev, std::abs(r / mean - 1.0));
    rep.ratio_max_dev = dev;
    return rep;
}

Vec damping_ratio_against(const DampingReport& rep, const EquilibriumWeights& wts,
                          const GammaTable& table)
{
    Vec out(rep.d.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = rep.d[i] / (wts.M[i] * table.value[i]);
    return out;
}

} // namespace ck
