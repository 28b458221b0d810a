#include "core/field.hpp"

#include <cmath>
#include <sstream>

namespace ck {

Sector& HarmonicField::require(int l, int m)
{
    for (auto& s : sectors)
        if (s.l == l && s.m == m) return s;
    std::ostringstream os;
    os << "sector (" << l << "," << m << ") not present";
    throw DomainError(os.str());
}

const Sector& HarmonicField::require(int l, int m) const
{
    for (const auto& s : sectors)
        if (s.l == l && s.m == m) return s;
    std::ostringstream os;
    os << "sector (" << l << "," << m << ") not present";
    throw DomainError(os.str());
}

void HarmonicField::add(Sector s)
{
    if (find(s.l, s.m)) {
        std::ostringstream os;
        os << "duplicate sector (" << s.l << "," << s.m << ")";
        throw ConfigError(os.str());
    }
    sectors.push_back(std::move(s));
}

void HarmonicField::validate() const
{
    for (const auto& s : sectors) {
        if (std::abs(s.m) > s.l) {
            std::ostringstream os;
            os << "sector (" << s.l << "," << s.m << ") violates |m| <= l";
            throw ConfigError(os.str());
        }
        for (double v : s.radial)
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite entry in sector (" << s.l << "," << s.m << ")";
                throw DomainError(os.str());
            }
    }
    for (std::size_t i = 0; i < sectors.size(); ++i)
        for (std::size_t j = i + 1; j < sectors.size(); ++j)
            if (sectors[i].l == sectors[j].l && sectors[i].m == sectors[j].m)
                throw ConfigError("duplicate sector");
}

double moment(const HarmonicField& field, int l, int m, int r,
              const RadialGrid& grid, const EquilibriumWeights& wts)
{
    const Sector& s = field.require(l, m);
    return radial_moment(s.radial, r, grid, wts);
}

} // namespace ck
