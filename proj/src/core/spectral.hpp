#pragma once

#include "core/collision.hpp"
#include "core/common.hpp"
#include "core/field.hpp"
#include "core/grid.hpp"

namespace ck {

// Cyclic Jacobi diagonalization of a symmetric matrix (row-major, n x n).
// Rotates until off(S)_F <= tol * ||S||_F. Returns eigenvalues ascending and
// the orthogonal V with S = V diag(lam) V^T. Throws ConvergenceError with the
// residual when the sweep budget is exhausted.
void jacobi_eigh(std::vector<double>& S, int n, Vec& lam, std::vector<double>& V,
                 double tol = 1e-13, int max_sweeps = 40);

// Spectral decomposition of the generator of M dF/dtau = L F in the
// symmetrized coordinates S = D^{1/2} M^{-1} A D^{-1/2}, D = diag(mu).
// The kernel direction D^{1/2} k is deflated exactly before iterating and
// eigenvalues are clamped to <= 0, so long-horizon propagation neither grows
// nor drifts the conserved energy moment.
struct EigenSystem {
    int N = 0;
    Vec lam;                  // descending: lam[0] = 0 (kernel), rest < 0
    std::vector<double> V;    // column-major eigenvectors in S coordinates
    Vec sqrt_mu;              // D^{1/2}
    Vec inv_sqrt_mu;          // D^{-1/2}
    Vec khat;                 // normalized D^{1/2} k (exact kernel direction)
    double lam_min = 0.0;     // most negative eigenvalue
    double lam_gap = 0.0;     // smallest nonzero |lambda|
    double kernel_cosine = 0.0;
    double offdiag_residual = 0.0;
    // largest nonkernel eigenvalue before the <= 0 clamp; sweep-level noise
    double spurious_positive = 0.0;

    // coordinates: x = V^T D^{1/2} F
    Vec to_modes(const Vec& F) const;
    Vec from_modes(const Vec& x) const;
};

EigenSystem spectral_decompose(const LinearOperator& op, const RadialGrid& grid,
                               const EquilibriumWeights& wts, double tol = 1e-13);

// v(tau) = D^{-1/2} V e^{Lam tau} V^T D^{1/2} F0
Vec propagate(const EigenSystem& eig, const Vec& F0, double tau);

struct TrajectoryRecord {
    Vec tau;
    struct SectorTrack {
        int l = 0, m = 0;
        Vec m0;            // dmu mass moment
        Vec m1;            // energy moment
        Vec dist_to_limit; // L2(dmu) distance to the projected limit
        std::vector<Vec> profiles; // optional snapshots (empty when disabled)
    };
    std::vector<SectorTrack> sectors;

    const SectorTrack& require(int l, int m) const;
};

TrajectoryRecord trajectory(const EigenSystem& eig, const HarmonicField& F0,
                            const RadialGrid& grid, const EquilibriumWeights& wts,
                            const Vec& tau_list, bool keep_profiles = false);

// Implicit-trapezoid time stepper for M dF/dtau = A F (cross-check path for
// the spectral propagator). Takes nsteps uniform steps of size dtau.
Vec implicit_trapezoid(const LinearOperator& op, const EquilibriumWeights& wts,
                       const Vec& F0, double dtau, int nsteps);

// Geometric tau sampling: {0} then tau_min..tau_max, samples_per_decade each.
Vec geometric_tau(double tau_min, double tau_max, int per_decade);

} // namespace ck
