#include "core/grid.hpp"

#include <cmath>

#include "core/quadrature.hpp"

namespace ck {

RadialGrid build_grid(double k_max, int N)
{
    if (!(k_max > 0.0)) throw ConfigError("k_max must be positive");
    if (N < 8) throw ConfigError("N must satisfy N >= 8");
    RadialGrid g;
    g.N = N;
    g.h = k_max / N;
    g.k_max = N * g.h;
    g.k.resize(static_cast<std::size_t>(N));
    g.w.assign(static_cast<std::size_t>(N), g.h);
    for (int i = 1; i <= N; ++i) g.k[static_cast<std::size_t>(i) - 1] = i * g.h;
    g.w.back() = 0.5 * g.h;
    return g;
}

EquilibriumWeights equilibrium_weights(const RadialGrid& grid)
{
    const std::size_t N = grid.k.size();
    EquilibriumWeights w;
    w.n0.resize(N);
    w.M.resize(N);
    w.sh.resize(N);
    w.qw = grid.w;
    const std::size_t m = std::min<std::size_t>(quad::kBoundaryStencil, N);
    for (std::size_t j = 0; j < m; ++j) w.qw[j] += grid.h * quad::kBoundaryAlpha[j];
    w.rho.resize(N);
    w.mu.resize(N);
    w.eta.resize(N);
    w.k2mu.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double k = grid.k[i];
        w.n0[i] = 1.0 / std::expm1(k);
        w.sh[i] = std::sinh(0.5 * k);
        w.M[i] = 1.0 / (4.0 * w.sh[i] * w.sh[i]);
        w.rho[i] = 4.0 * M_PI * k * k * w.qw[i];
        w.mu[i] = w.rho[i] * w.M[i];
        w.eta[i] = w.mu[i] * k;
        w.k2mu[i] = w.eta[i] * k;
    }
    return w;
}

double radial_moment(const Vec& F, int r, const RadialGrid& grid,
                     const EquilibriumWeights& wts)
{
    if (r < 0 || r > 2) throw DomainError("moment power r must be 0, 1 or 2");
    const Vec& wr = (r == 0) ? wts.mu : (r == 1) ? wts.eta : wts.k2mu;
    (void)grid;
    double s = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) s += F[i] * wr[i];
    return s;
}

} // namespace ck
