#include "pulsedyn/model.hpp"

#include <algorithm>
#include <limits>

#include "pulsedyn/error.hpp"

namespace pulsedyn {

void validate(const ModelParams& p)
{
    if (!(p.tau > 0))
        throw Error("invalid-parameter", "tau must be > 0");
    if (!(p.D > 0))
        throw Error("invalid-parameter", "D must be > 0");
    if (!(p.epsilon > 0))
        throw Error("invalid-parameter", "epsilon must be > 0");
    if (!(p.delta0 >= 0 && p.delta0 < 0.5))
        throw Error("invalid-parameter", "delta0 must satisfy 0 <= delta0 < 1/2");
}

DerivedCoefficients DerivedCoefficients::base(double D)
{
    DerivedCoefficients c;
    const double sD = std::sqrt(D);
    c.m0 = 3.0 / (16.0 * sD);
    c.tau_c = 1.0 / (4.0 * std::sqrt(2.0 * D));
    c.g3 = 1.0 / (32.0 * D * sD);
    c.G0 = 0.5;
    c.G1 = 1.0 / (4.0 * sD);
    c.phi0 = 1.0 / sD;
    c.phi1 = 1.0 / (2.0 * D);
    c.phi2 = 1.0 / (8.0 * D * sD);
    c.h0 = std::numeric_limits<double>::quiet_NaN();
    c.g3_tilde = std::numeric_limits<double>::quiet_NaN();
    return c;
}

DerivedCoefficients derive_coefficients(const ModelParams& p)
{
    validate(p);
    if (p.delta0 == 0.0)
        throw Error("degenerate-baseline", "delta0 = 0: stationary width h0 diverges");

    DerivedCoefficients c = DerivedCoefficients::base(p.D);
    c.h0 = -std::sqrt(p.D) * std::log(2.0 * p.delta0);

    const double ph = c.phi1 * c.h0;
    const double gr = c.G1 / c.G0;
    const double pr = c.phi1 / c.phi2;
    c.g3_tilde = p.delta0 * ((1.0 + gr * gr - gr * pr) * ph
                             + (gr - 0.5 * pr) * ph * ph
                             + ph * ph * ph / 3.0);
    return c;
}

Prefactors prefactors(double r, double h, const ModelParams& p)
{
    const double D = p.D;
    const double ph = phi_kin(r, D);
    const double ph3 = ph * ph * ph;
    const double ph4 = ph3 * ph;
    const double ph5 = ph4 * ph;

    Prefactors f;
    f.m = 6.0 * D * D / ph5;
    f.M = f.m + 3.0 * D * h / ph4 + h * h / (2.0 * ph3);
    f.g = -std::sqrt(2.0) * p.tau * r + r / (2.0 * ph);
    f.G = (r + ph) / (2.0 * ph);
    return f;
}

// ---------------------------------------------------------------------------
// Heterogeneity
// ---------------------------------------------------------------------------

namespace {

double sigmoid(double y)
{
    // Stable for large |y|.
    return y >= 0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
}

} // namespace

double het_delta(const Heterogeneity& het, const ModelParams& p, double x)
{
    return std::visit(
        [&](const auto& h) -> double {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, ConstantHet>) {
                return p.delta0;
            } else if constexpr (std::is_same_v<T, SmoothBump>) {
                const double xl = x - h.xc + h.d0 / 2.0;
                const double xr = x - h.xc - h.d0 / 2.0;
                return p.delta0 + h.eps0 * (sigmoid(h.gamma * xl) - sigmoid(h.gamma * xr));
            } else if constexpr (std::is_same_v<T, SharpBump>) {
                const double xi = x - h.xc;
                return (xi >= -h.d0 / 2.0 && xi <= h.d0 / 2.0) ? p.delta0 + h.eps0 : p.delta0;
            } else if constexpr (std::is_same_v<T, SquareWell>) {
                const double xi = x - h.xc;
                const double inner = h.d0 / 2.0;
                const double outer = h.d0 / 2.0 + h.d1;
                if (xi >= -inner && xi < inner)
                    return p.delta0 + h.eps2;
                if ((xi >= -outer && xi < -inner) || (xi >= inner && xi < outer))
                    return p.delta0 + h.eps1;
                return p.delta0;
            } else {
                static_assert(std::is_same_v<T, Tabulated>);
                if (h.x.empty() || x <= h.x.front() || x >= h.x.back()) {
                    if (!h.x.empty() && x == h.x.front())
                        return h.d.front();
                    return p.delta0;
                }
                auto it = std::upper_bound(h.x.begin(), h.x.end(), x);
                const std::size_t i = static_cast<std::size_t>(it - h.x.begin());
                const double w = (x - h.x[i - 1]) / (h.x[i] - h.x[i - 1]);
                return h.d[i - 1] * (1.0 - w) + h.d[i] * w;
            }
        },
        het);
}

std::vector<double> het_edges(const Heterogeneity& het)
{
    return std::visit(
        [](const auto& h) -> std::vector<double> {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, SmoothBump>) {
                return {h.xc - h.d0 / 2.0, h.xc + h.d0 / 2.0};
            } else if constexpr (std::is_same_v<T, SharpBump>) {
                return {h.xc - h.d0 / 2.0, h.xc + h.d0 / 2.0};
            } else if constexpr (std::is_same_v<T, SquareWell>) {
                return {h.xc - h.d0 / 2.0 - h.d1, h.xc - h.d0 / 2.0,
                        h.xc + h.d0 / 2.0, h.xc + h.d0 / 2.0 + h.d1};
            } else {
                return {};
            }
        },
        het);
}

std::optional<std::pair<double, double>> het_support(const Heterogeneity& het)
{
    return std::visit(
        [](const auto& h) -> std::optional<std::pair<double, double>> {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, ConstantHet>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, SmoothBump>) {
                // Sigmoid tails decay at rate gamma; a few widths suffice.
                const double pad = 20.0 / h.gamma;
                return std::make_pair(h.xc - h.d0 / 2.0 - pad, h.xc + h.d0 / 2.0 + pad);
            } else if constexpr (std::is_same_v<T, SharpBump>) {
                return std::make_pair(h.xc - h.d0 / 2.0, h.xc + h.d0 / 2.0);
            } else if constexpr (std::is_same_v<T, SquareWell>) {
                return std::make_pair(h.xc - h.d0 / 2.0 - h.d1, h.xc + h.d0 / 2.0 + h.d1);
            } else {
                static_assert(std::is_same_v<T, Tabulated>);
                if (h.x.empty())
                    return std::nullopt;
                return std::make_pair(h.x.front(), h.x.back());
            }
        },
        het);
}

double het_center(const Heterogeneity& het)
{
    return std::visit(
        [](const auto& h) -> double {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, SmoothBump> || std::is_same_v<T, SharpBump> ||
                          std::is_same_v<T, SquareWell>) {
                return h.xc;
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                return h.x.empty() ? 0.0 : 0.5 * (h.x.front() + h.x.back());
            } else {
                return 0.0;
            }
        },
        het);
}

std::string het_name(const Heterogeneity& het)
{
    switch (het.index()) {
    case 0: return "constant";
    case 1: return "smooth-bump";
    case 2: return "sharp-bump";
    case 3: return "square-well";
    default: return "tabulated";
    }
}

// ---------------------------------------------------------------------------
// Response profiles
// ---------------------------------------------------------------------------

double box_response(double x, double a, double b, double D)
{
    const double s = std::sqrt(D);
    const double c = (b - a) / 2.0;
    const double xi = x - (a + b) / 2.0;
    if (std::abs(xi) <= c)
        return 1.0 - std::exp(-c / s) * std::cosh(xi / s);
    // sinh(c/s) e^{-|xi|/s}, written to avoid overflow for wide boxes
    return 0.5 * (std::exp((c - std::abs(xi)) / s) - std::exp((-c - std::abs(xi)) / s));
}

ResponseProfile ResponseProfile::constant(double delta0)
{
    ResponseProfile r;
    r.kind_ = Kind::Constant;
    r.provenance_ = Provenance::Analytic;
    r.delta0_ = delta0;
    return r;
}

ResponseProfile ResponseProfile::boxes(double delta0, std::vector<BoxTerm> terms, double D)
{
    ResponseProfile r;
    r.kind_ = Kind::Boxes;
    r.provenance_ = Provenance::Analytic;
    r.delta0_ = delta0;
    r.D_ = D;
    r.terms_ = std::move(terms);
    return r;
}

ResponseProfile ResponseProfile::grid(double x0, double dx, std::vector<double> values, double delta0)
{
    ResponseProfile r;
    r.kind_ = Kind::Grid;
    r.provenance_ = Provenance::Numeric;
    r.delta0_ = delta0;
    r.x0_ = x0;
    r.dx_ = dx;
    r.values_ = std::move(values);
    return r;
}

double ResponseProfile::operator()(double x) const
{
    switch (kind_) {
    case Kind::Constant:
        return delta0_;
    case Kind::Boxes: {
        double s = delta0_;
        for (const auto& t : terms_)
            s += t.height * box_response(x, t.a, t.b, D_);
        return s;
    }
    case Kind::Grid: {
        const double u = (x - x0_) / dx_;
        if (u <= 0.0)
            return values_.front();
        const double last = static_cast<double>(values_.size() - 1);
        if (u >= last)
            return values_.back();
        const std::size_t i = static_cast<std::size_t>(u);
        const double w = u - static_cast<double>(i);
        return values_[i] * (1.0 - w) + values_[i + 1] * w;
    }
    }
    return delta0_;
}

ResponseProfile response_analytic(const Heterogeneity& het, const ModelParams& p)
{
    validate(p);
    return std::visit(
        [&](const auto& h) -> ResponseProfile {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, ConstantHet>) {
                return ResponseProfile::constant(p.delta0);
            } else if constexpr (std::is_same_v<T, SharpBump>) {
                return ResponseProfile::boxes(
                    p.delta0, {{h.eps0, h.xc - h.d0 / 2.0, h.xc + h.d0 / 2.0}}, p.D);
            } else if constexpr (std::is_same_v<T, SquareWell>) {
                const double inner = h.d0 / 2.0;
                const double outer = h.d0 / 2.0 + h.d1;
                return ResponseProfile::boxes(p.delta0,
                                              {{h.eps1, h.xc - outer, h.xc - inner},
                                               {h.eps2, h.xc - inner, h.xc + inner},
                                               {h.eps1, h.xc + inner, h.xc + outer}},
                                              p.D);
            } else {
                throw Error("use-response-numeric",
                            "no closed-form response for " + het_name(het));
            }
        },
        het);
}

ResponseProfile response_numeric(const Heterogeneity& het, const ModelParams& p,
                                 double x_lo, double x_hi, int grid_n)
{
    validate(p);
    if (grid_n < 16)
        throw Error("invalid-argument", "response_numeric requires grid_n >= 16");
    if (!(x_hi > x_lo))
        throw Error("invalid-argument", "response_numeric requires x_hi > x_lo");

    const int n = grid_n;
    const double dx = (x_hi - x_lo) / (n - 1);
    const double D = p.D;

    // D (v[i-1] - 2 v[i] + v[i+1])/dx^2 - v[i] + delta(x_i) = 0,
    // Dirichlet v = delta0 at both ends. Thomas solve.
    const double off = D / (dx * dx);
    std::vector<double> a(n, off), b(n, -2.0 * off - 1.0), c(n, off), d(n);
    for (int i = 0; i < n; ++i)
        d[i] = -het_delta(het, p, x_lo + i * dx);
    a[0] = c[0] = 0.0;
    b[0] = 1.0;
    d[0] = p.delta0;
    a[n - 1] = c[n - 1] = 0.0;
    b[n - 1] = 1.0;
    d[n - 1] = p.delta0;

    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (int i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    std::vector<double> v(n);
    v[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i)
        v[i] = dp[i] - cp[i] * v[i + 1];

    // Far-field check one diffusion length inside each boundary.
    const int k = std::max(1, static_cast<int>(std::round(std::sqrt(D) / dx)));
    if (std::abs(v[k] - p.delta0) > 1e-6 || std::abs(v[n - 1 - k] - p.delta0) > 1e-6)
        throw Error("far-field-violation",
                    "response has not decayed to delta0 at the domain boundary");

    return ResponseProfile::grid(x_lo, dx, std::move(v), p.delta0);
}

std::pair<double, double> default_response_domain(const Heterogeneity& het, const ModelParams& p)
{
    const double margin = 12.0 * std::sqrt(p.D);
    if (auto sup = het_support(het))
        return {sup->first - margin, sup->second + margin};
    return {-margin, margin};
}

} // namespace pulsedyn
