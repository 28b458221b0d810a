#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ck::quad {

namespace {

// Gauss-Kronrod 15/7 nodes and weights on [-1,1] (positive half; symmetric).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += wgk[j] * fsum;
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * hl;
    p.error = std::abs((resk - resg) * hl);
    return p;
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol_rel, double tol_abs, int max_intervals)
{
    Result out;
    if (a == b) return out;
    std::vector<Panel> panels;
    panels.push_back(gk15(f, a, b));
    while (static_cast<int>(panels.size()) < max_intervals) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const double goal =
            std::max(tol_abs, tol_rel * std::abs(total)) +
            8.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
        if (err <= goal || panels[worst].error == 0.0) {
            out.value = total;
            out.error = err;
            return out;
        }
        Panel w = panels[worst];
        panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(worst));
        const double m = 0.5 * (w.a + w.b);
        panels.push_back(gk15(f, w.a, m));
        panels.push_back(gk15(f, m, w.b));
    }
    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        err += p.error;
    }
    out.value = total;
    out.error = err;
    out.converged = err <= std::max(tol_abs, tol_rel * std::abs(total)) * 4.0;
    return out;
}

double gk15_fixed(const std::function<double(double)>& f, double a, double b)
{
    return gk15(f, a, b).value;
}

Result integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& pts, double tol_rel,
                        double tol_abs)
{
    Result total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Result r = integrate(f, pts[i], pts[i + 1], tol_rel, tol_abs);
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    }
    return total;
}

// Exact rational solution of the order-7 moment conditions with eight weights
// pinned at -3/4; see docs/quadrature.md for the derivation.
const std::array<double, kBoundaryStencil> kBoundaryAlpha = {
    1.3842774353989631,   // 828838883/598752000
    -0.75,
    -0.75,
    -0.75,
    2.2771036706349208,   // 4590641/2016000
    0.20899667475014697,  // 11376107/54432000
    -0.75,
    -0.75,
    -0.75,
    0.36885436875367433,  // 20077481/54432000
    1.8984082341269841,   // 3827191/2016000
    -0.46720791746833412, // -3729889/7983360
    -0.75,
    -0.75,
    1.1780622979129924,   // 64124287/54432000
    -0.34849476410934743, // -6323089/18144000
};

} // namespace ck::quad
