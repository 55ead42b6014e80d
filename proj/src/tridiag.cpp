#include "pulsedyn/tridiag.hpp"

#include <cstddef>

namespace pulsedyn {

void tridiag_solve(double lo, double di, double up, double d0, double u0, double dn, double ln,
                   const std::vector<double>& r, std::vector<double>& x, std::vector<double>& cp)
{
    const std::size_t n = r.size();
    x.resize(n);
    cp.resize(n);

    cp[0] = u0 / d0;
    x[0] = r[0] / d0;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = (i == n - 1) ? ln : lo;
        const double b = (i == n - 1) ? dn : di;
        const double c = (i == n - 1) ? 0.0 : up;
        const double m = b - a * cp[i - 1];
        cp[i] = c / m;
        x[i] = (r[i] - a * x[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= cp[i] * x[i + 1];
}

void cyclic_tridiag_solve(double lo, double di, double up, const std::vector<double>& r,
                          std::vector<double>& x, std::vector<double>& z,
                          std::vector<double>& cp, std::vector<double>& u)
{
    const std::size_t n = r.size();
    // Sherman-Morrison: strip the corners into a rank-1 update.
    const double gamma = -di;
    const double d_first = di - gamma;
    const double d_last = di - lo * up / gamma;

    tridiag_solve(lo, di, up, d_first, up, d_last, lo, r, x, cp);

    u.assign(n, 0.0);
    u[0] = gamma;
    u[n - 1] = lo;
    tridiag_solve(lo, di, up, d_first, up, d_last, lo, u, z, cp);

    const double factor =
        (x[0] + up * x[n - 1] / gamma) / (1.0 + z[0] + up * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i)
        x[i] -= factor * z[i];
}

} // namespace pulsedyn
