#pragma once

#include "core/common.hpp"
#include "core/gamma.hpp"
#include "core/grid.hpp"

namespace ck {

// Prefactor of the collinear-reduced collision integrals. Integrating the
// momentum and energy deltas of the three-wave operator over the collinear
// manifold with omega = sqrt(n_c)|p| and |M|^2 = |p||p1||p2|/n_c yields an
// azimuthal factor 2*pi/n_c^{3/2} in front of the radial integrals. The
// default c0 folds in the artifact's time unit, chosen so that the damping
// part of the linearized operator is exactly Gamma(k/2) n0 (1+n0): c0 = 1/16.
// All operator outputs scale linearly in c0.
struct ReductionConstants {
    double c0 = 0.0625;
    double n_c = 1.0;
    double prefactor() const { return c0 / (n_c * std::sqrt(n_c)); }
};

// Dense discretization of the linearized collinear operator.
//
//   L(F)(k) = c0 [ int_0^k  k1^2 k2^2 rho3(k1,k2) (F(k1)+F(k2)-F(k)) dk1
//            + 2  int_0^{kmax-k} k1^2 (k+k1)^2 rho3(k,k1) (F(k+k1)-F(k)-F(k1)) dk1 ],
//   k2 = k - k1,  rho3(a,b) = n0(a) n0(b) (1+n0(a+b)).
//
// Rows use the pair weights s_ab = qw_a qw_b qw_{a+b} / h divided by the
// row's own qw_i. Under the 4 pi k^2 qw pairing this makes
//   <A F, G> = -4 pi c0 sum_{a,b>=1, a+b<=N} s_ab W_ab T_F(a,b) T_G(a,b),
//   W_ab = k_a^2 k_b^2 k_{a+b}^2 rho3,  T_F(a,b) = F_a + F_b - F_{a+b},
// an exact identity: symmetry, negative semidefiniteness, kernel = span{k}
// and the energy-column identity hold to rounding by construction.
struct LinearOperator {
    int N = 0;
    ReductionConstants constants;
    std::vector<double> A; // row-major N x N
    Vec damping_grid;      // grid-rule damping sums (coefficient of -F_i)

    double at(int i, int j) const
    {
        return A[static_cast<std::size_t>(i) * static_cast<std::size_t>(N) +
                 static_cast<std::size_t>(j)];
    }
    Vec apply(const Vec& F) const;
};

LinearOperator assemble_linearized(const RadialGrid& grid, const EquilibriumWeights& wts,
                                   const ReductionConstants& constants = {});

// Pointwise nonlinear collision rate Q3(n)(k) on the grid, with the same
// discrete quadrature rule as the assembled operator (so that the finite
// difference (Q3(n0 + eps M F) - Q3(n0))/eps converges to A F).
Vec q3_radial(const Vec& n, double n_c, const RadialGrid& grid,
              const EquilibriumWeights& wts, const ReductionConstants& constants = {});

// Symmetrized double-integral form of <L F, G>_dp, evaluated without the
// matrix. Equal to the matrix pairing to rounding.
double quadratic_form(const Vec& F, const Vec& G, const RadialGrid& grid,
                      const EquilibriumWeights& wts,
                      const ReductionConstants& constants = {});

// dp pairing <X, Y> = sum_i X_i Y_i rho_i.
double dp_pairing(const Vec& X, const Vec& Y, const EquilibriumWeights& wts);

struct DampingReport {
    Vec d;           // adaptive quadrature of the two damping integrals
    Vec gamma_half;  // Gamma(k_i/2)
    Vec ratio;       // d_i / (M_i Gamma(k_i/2)); constant 16*c0
    double ratio_mean = 0.0;
    double ratio_max_dev = 0.0; // max_i |ratio_i/mean - 1|
};

// Damping coefficient d(k) of -F(k) in the continuum operator, by adaptive
// quadrature, and its cross-identification with the damping function at half
// argument: d(k) = 16 c0 n0(k)(1+n0(k)) Gamma(k/2).
DampingReport damping_coefficient(const RadialGrid& grid, const EquilibriumWeights& wts,
                                  const GammaTable& half_table,
                                  const ReductionConstants& constants = {});

// Same ratio against a full-argument table (control: not constant).
Vec damping_ratio_against(const DampingReport& rep, const EquilibriumWeights& wts,
                          const GammaTable& table);

} // namespace ck
