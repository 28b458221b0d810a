#pragma once

#include <functional>

#include "core/timechange.hpp"

namespace ck {

// Asymptotic state u_inf = sum_lm c_lm Y_lm |p|. c_lm is the energy-moment
// preserving projection <F, k>_dmu / <k, k>_dmu; the literal dmu integral
// of the sector (the published formula, which does not preserve the energy
// moment) is reported alongside.
struct AsymptoticState {
    struct SectorCoef {
        int l = 0, m = 0;
        double c = 0.0;         // projection coefficient
        double c_literal = 0.0; // integral of F dmu over the sector
    };
    std::vector<SectorCoef> coefs;
    HarmonicField u_inf;
    double n_star = 0.0; // sector (0,0) dmu-mass gap, 0 when absent
};

AsymptoticState u_infinity(const HarmonicField& u0, const RadialGrid& grid,
                           const EquilibriumWeights& wts);

double n_star(const HarmonicField& u0, const AsymptoticState& state,
              const RadialGrid& grid, const EquilibriumWeights& wts);

struct DecayFit {
    enum class Status { Ok, Stationary, WindowTooShort };
    Status status = Status::Ok;
    std::string message;
    double t_lo = 0.0, t_hi = 0.0; // requested trusted window
    int points = 0;
    double slope_u = 0.0;   // d log dist / d log(1+t)
    double slope_mc = 0.0;  // same for |m_c^2 - m_c^2(0) + 2 N_*|
    double C_fit = 0.0;     // max over window of dist * sqrt(1 + t/(m_c0^2-2N_*))
    bool bound_holds = false; // dist <= C_fit (1 + t/(m_c0^2-2N_*))^{-1/2} for t >= t_lo
    bool window_spans_two_decades = false;
};

// Least-squares decay-rate fit on the trusted window [1, 0.1/rate_k1], where
// rate_k1 is the derived damping rate at the smallest momentum node. Samples
// are (t, dist, mc_sq_gap) triples; pass mc_sq_gap empty to skip that fit.
DecayFit decay_fit(const Vec& t, const Vec& dist, const Vec& mc_sq_gap, double rate_k1,
                   double qinf_sq, double dist0);

struct SmallkNorm {
    double value = 0.0;    // at the working grid
    double value_fine = 0.0; // at the doubled grid
    bool marginal = false; // grows under refinement
};

// sum_{k_i < 1} u0(k_i)^2 mu_i / k_i, checked at N and 2N.
SmallkNorm weighted_smallk_norm(const std::function<double(double)>& u0,
                                const RadialGrid& grid);

struct DepletionScan {
    struct Row {
        double m_c0 = 0.0;
        bool admissible = false;
        double margin_or_tau_star = 0.0;
    };
    std::vector<Row> rows;
    bool stationary = false;
    double threshold = 0.0; // bisected m_c0*
    double sup_g = 0.0;
};

// Bisection over m_c0 for the admissibility boundary m_c0*^2 = 2 sup g.
DepletionScan depletion_scan(const MassModeSum& modes, double n_star_value,
                             const Vec& tau_samples, double m_lo, double m_hi,
                             double rel_tol = 1e-4);

} // namespace ck
