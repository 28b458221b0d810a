#pragma once

#include <array>
#include <functional>

#include "core/common.hpp"

namespace ck::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;     // estimated absolute error
    bool converged = true;  // false when the tolerance was unreachable
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Splits the worst interval until
// the summed error estimate meets tol_rel*|value| + tol_abs or the interval
// budget runs out.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol_rel, double tol_abs = 0.0, int max_intervals = 4000);

// Convenience: integrate over consecutive panels [pts[0],pts[1]], ... and sum.
Result integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& pts, double tol_rel,
                        double tol_abs = 0.0);

// Fixed (non-adaptive) 15-point Gauss-Kronrod value on [a,b]. Deterministic
// and smooth in the endpoints; used where the error must cancel in finite
// differences of the result.
double gk15_fixed(const std::function<double(double)>& f, double a, double b);

// Open-end boundary correction stencil for uniform-grid sums that omit the
// x = 0 node: integral[0,inf) f ~= h*sum_{i>=1} f(i h) + h*sum_j alpha[j-1] f(j h).
// Matches the Euler-Maclaurin closure (h/2)f(0) + (h^2/12)f'(0)
// - (h^4/720)f'''(0) + (h^6/30240)f^(5)(0) exactly on polynomials up to x^7,
// with every combined weight h*(1+alpha_j) positive.
inline constexpr std::size_t kBoundaryStencil = 16;
extern const std::array<double, kBoundaryStencil> kBoundaryAlpha;

} // namespace ck::quad
