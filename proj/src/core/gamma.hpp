#pragma once

#include "core/common.hpp"
#include "core/grid.hpp"

namespace ck {

struct GammaValue {
    double value = 0.0;
    double error = 0.0;   // quadrature error estimate
    bool converged = true;
};

// Phonon damping function
//   Gamma(x) = sinh x * int_0^inf (y^2/sinh y) [ |x-y|^2/sinh|x-y|
//                                              + (x+y)^2/sinh(x+y) ] dy.
// The integrand is evaluated through the ratio
//   sinh x / (sinh y sinh(x-+y)) = 2 e^{...} (1-e^{-2x}) / ((1-e^{-2y})(1-e^{-2|x-+y|}))
// which stays bounded for arbitrarily large x. Domain split at the kink y = x,
// truncation at y = x + 60 (tail < 1e-18 relative).
GammaValue gamma_paper(double x, double tol_rel);

// int_0^inf y^2/sinh y dy = (7/2) zeta(3); exposed for the oracle checks.
GammaValue gamma_sub_integral(double tol_rel);

struct GammaTable {
    Vec x;      // arguments (k_i or k_i/2)
    Vec value;
    Vec error;
    double scale = 1.0; // 1 or 0.5
};

// Gamma on the grid nodes, at argument scale 1 or 1/2. Parallel over nodes.
GammaTable gamma_table(const RadialGrid& grid, double argument_scale, double tol_rel);

} // namespace ck
