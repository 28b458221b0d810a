#pragma once

#include "core/spectral.hpp"

namespace ck {

struct InadmissibleError : DomainError {
    InadmissibleError(const std::string& msg, double tau_star_, double g_at_)
        : DomainError(msg), tau_star(tau_star_), g_at(g_at_)
    {
    }
    double tau_star;
    double g_at;
};

// Analytic mode expansion of the gas dmu-mass along the linear flow:
//   m0(tau) = sum_j b_j e^{lam_j tau},  g(tau) = m0(tau) - m0(0).
// Exact within the spectral propagator, so the total-mass ledger
// m_c^2(t) + 2 m0(t) = const holds to rounding by construction.
struct MassModeSum {
    Vec lam;
    Vec b;
    double eval_g(double tau) const;      // g(tau)
    double eval_gprime(double tau) const; // g'(tau)
    double g_infinity() const;            // lim g = -sum_{lam<0} b_j
};

MassModeSum mass_mode_sum(const EigenSystem& eig, const Vec& u0_radial,
                          const EquilibriumWeights& wts);

// g samples from a trajectory record, sector (0,0): g = m0(tau) - m0(0).
Vec gas_mass_shift(const TrajectoryRecord& traj);

struct Admissibility {
    bool admissible = false;
    double sup_g = 0.0;
    double tau_at_sup = 0.0; // +inf encoded as the asymptote sample
    bool sup_at_infinity = false;
    double margin = 0.0; // m_c0^2 - 2 sup g
    bool caveat = false; // sampled sup within 1% of the threshold
    double tau_star = std::numeric_limits<double>::quiet_NaN(); // when inadmissible
};

// sup over the samples, golden-section refinement around interior maxima of
// the analytic g, and the asymptote N_*.
Admissibility check_admissibility(double m_c0, const MassModeSum& modes, double n_star,
                                  const Vec& tau_samples);

struct TimeChangeMap {
    double m_c0 = 0.0;
    double n_star = 0.0;
    double q_inf = 0.0; // sqrt(m_c0^2 - 2 N_*)
    Admissibility verdict;
    MassModeSum modes;
    Vec tau; // dense samples (geometric + refinement points)
    Vec g;
    Vec qc;
    Vec t; // cumulative integral of qc over the samples

    double g_eval(double tau_) const { return modes.eval_g(tau_); }
    double qc_eval(double tau_) const;
    double t_of_tau(double tau_) const; // adaptive quadrature from nearest sample
    // inverse map; *extrapolated set when t lies beyond the sampled horizon
    double tau_of_t(double t_, bool* extrapolated = nullptr) const;
};

TimeChangeMap build_map(double m_c0, const MassModeSum& modes, double n_star,
                        const Vec& tau_samples);

struct ReconstructedRun {
    Vec t;
    Vec tau;
    Vec m_c;
    // sector tracks in the order of the input field
    struct Track {
        int l = 0, m = 0;
        Vec m0, m1, dist_to_limit;
        std::vector<Vec> profiles;
    };
    std::vector<Track> sectors;
    bool any_extrapolated = false;
};

ReconstructedRun reconstruct(const EigenSystem& eig, const TimeChangeMap& map,
                             const HarmonicField& u0, const RadialGrid& grid,
                             const EquilibriumWeights& wts, const Vec& t_list,
                             bool keep_profiles = false);

struct ResidualReport {
    double r_mass_abs = 0.0, r_mass = 0.0;   // Eq for m_c' (mass exchange)
    double r_energy_abs = 0.0, r_energy = 0.0; // energy-moment drift rate
    double r_ode_abs = 0.0, r_ode = 0.0;     // Gamma-weighted field equation
    double scale_mass = 0.0, scale_ode = 0.0;
    double dt = 0.0, t0 = 0.0;
    int samples = 0;
};

// Centered-difference residuals of the coupled system on a uniform t grid
// starting past the stiff transient (t0 >= ~50 dt recommended).
ResidualReport residuals(const EigenSystem& eig, const LinearOperator& op,
                         const RadialGrid& grid, const EquilibriumWeights& wts,
                         const TimeChangeMap& map, const HarmonicField& u0,
                         const GammaTable& gamma_full, double t0, double dt, int n);

} // namespace ck
