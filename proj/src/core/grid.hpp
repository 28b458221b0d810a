#pragma once

#include "core/common.hpp"

namespace ck {

// Uniform momentum grid k_i = i*h, i = 1..N. The resonance k_a + k_b = k_{a+b}
// maps nodes to nodes by index arithmetic, so the collision sums never
// interpolate. Trapezoid weights over (0, k_max] with the k = 0 node dropped.
struct RadialGrid {
    double h = 0.0;
    int N = 0;
    double k_max = 0.0;
    Vec k; // k[i-1] = i*h
    Vec w; // trapezoid: h, ..., h, h/2  (sum = k_max - h/2)

    double node(int i) const { return k[static_cast<std::size_t>(i) - 1]; }
};

RadialGrid build_grid(double k_max, int N);

// Per-node equilibrium data and measure weights. qw carries the open-end
// boundary closure (quad::kBoundaryAlpha) so that sums over nodes reproduce
// integrals over [0, inf) of smooth decaying integrands; rho/mu/eta are the
// dp, dmu and energy-dmu weights built from qw. The same qw weights the
// operator pairing, which keeps the discrete conservation identities exact.
struct EquilibriumWeights {
    Vec n0;   // 1/(e^k - 1)
    Vec M;    // n0(1+n0)
    Vec sh;   // sinh(k_i/2); sh[i-1] pairs with node i
    Vec qw;   // corrected dk quadrature weights
    Vec rho;  // 4 pi k^2 qw
    Vec mu;   // rho * M
    Vec eta;  // mu * k
    Vec k2mu; // mu * k^2
};

EquilibriumWeights equilibrium_weights(const RadialGrid& grid);

// Detailed-balance pair weight rho3(a,b) = n0(a) n0(b) (1+n0(a+b))
//                                       = 1/(8 sinh(a/2) sinh(b/2) sinh((a+b)/2)).
inline double rho3(const EquilibriumWeights& wts, int a, int b)
{
    return 1.0 / (8.0 * wts.sh[static_cast<std::size_t>(a) - 1] *
                  wts.sh[static_cast<std::size_t>(b) - 1] *
                  wts.sh[static_cast<std::size_t>(a + b) - 1]);
}

// sum_i F_i k_i^r mu_i for r in {0,1,2}.
double radial_moment(const Vec& F, int r, const RadialGrid& grid,
                     const EquilibriumWeights& wts);

} // namespace ck
