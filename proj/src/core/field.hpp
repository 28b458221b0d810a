#pragma once

#include <optional>
#include <string>

#include "core/common.hpp"
#include "core/grid.hpp"

namespace ck {

// One (l, m) sector of a perturbation, holding its radial coefficient vector.
// Sectors evolve independently under the shared radial operator; only (0,0)
// couples to the condensate mass exchange.
struct Sector {
    int l = 0;
    int m = 0;
    Vec radial; // length N
    std::string profile_text; // original expression when built from one
};

struct HarmonicField {
    std::vector<Sector> sectors;

    const Sector* find(int l, int m) const
    {
        for (const auto& s : sectors)
            if (s.l == l && s.m == m) return &s;
        return nullptr;
    }
    Sector& require(int l, int m);
    const Sector& require(int l, int m) const;
    void add(Sector s);
    void validate() const; // finite entries, no duplicate sectors
};

// moment over one sector: sum_i F_i k_i^r mu_i
double moment(const HarmonicField& field, int l, int m, int r,
              const RadialGrid& grid, const EquilibriumWeights& wts);

} // namespace ck
