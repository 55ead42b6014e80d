#include "pulsedyn/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace pulsedyn {

namespace {

double polish_real_root(double c3, double c2, double c1, double c0, double x)
{
    // Two Newton steps; the closed forms are accurate already, this just
    // removes the last few ulps of cancellation noise.
    for (int it = 0; it < 2; ++it) {
        double f = ((c3 * x + c2) * x + c1) * x + c0;
        double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if (df == 0.0)
            break;
        double step = f / df;
        if (!std::isfinite(step))
            break;
        x -= step;
    }
    return x;
}

} // namespace

std::array<std::complex<double>, 3> solve_cubic(double c3, double c2, double c1, double c0)
{
    const double A = c2 / c3;
    const double B = c1 / c3;
    const double C = c0 / c3;

    // Depressed form t^3 + p t + q via x = t - A/3.
    const double shift = A / 3.0;
    const double p = B - A * A / 3.0;
    const double q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;

    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::array<std::complex<double>, 3> roots;
    if (disc > 0.0) {
        // One real root, one conjugate pair.
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sq);
        const double v = std::cbrt(-q / 2.0 - sq);
        const double t0 = u + v;
        const double re = -t0 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        roots[0] = polish_real_root(c3, c2, c1, c0, t0 - shift);
        roots[1] = {re - shift, im};
        roots[2] = {re - shift, -im};
    } else if (p == 0.0 && q == 0.0) {
        roots[0] = roots[1] = roots[2] = -shift;
    } else {
        // Three real roots (casus irreducibilis), trigonometric form.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        std::array<double, 3> t{
            m * std::cos(theta),
            m * std::cos(theta - 2.0 * M_PI / 3.0),
            m * std::cos(theta - 4.0 * M_PI / 3.0),
        };
        std::sort(t.begin(), t.end());
        for (int i = 0; i < 3; ++i)
            roots[i] = polish_real_root(c3, c2, c1, c0, t[i] - shift);
    }
    return roots;
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0, double imag_tol)
{
    const auto roots = solve_cubic(c3, c2, c1, c0);
    double scale = 0.0;
    for (const auto& r : roots)
        scale = std::max(scale, std::abs(r));
    if (scale == 0.0)
        scale = 1.0;

    std::vector<double> out;
    for (const auto& r : roots)
        if (std::abs(r.imag()) <= imag_tol * scale)
            out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pulsedyn
