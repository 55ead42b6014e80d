#include "pulsedyn/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pulsedyn/cubic.hpp"
#include "pulsedyn/error.hpp"

namespace pulsedyn {

StationaryPulse sp_homogeneous(const ModelParams& p, const DerivedCoefficients& c)
{
    if (p.delta0 >= 0.5)
        throw Error("no-stationary-pulse", "delta0 >= 1/2: no standing pulse");
    if (p.delta0 == 0.0)
        throw Error("degenerate-baseline", "delta0 = 0: stationary width diverges");
    return {c.h0, 0.0, StationaryPulse::Kind::SP};
}

BifurcationPoints bifurcation_points(const ModelParams& p, const DerivedCoefficients& c)
{
    const StationaryPulse sp = sp_homogeneous(p, c);
    const double gap = std::sqrt(2.0) * (c.G1 + c.G0 * c.phi1 * sp.h_star) * p.delta0;

    BifurcationPoints b;
    b.tau_d = c.tau_c - gap;
    b.tau_H = c.tau_c + gap;
    b.P = 2.0 * c.G0 * c.phi0 * p.delta0 / c.m0;
    b.R = 2.0 * p.delta0 * (c.G1 + c.G0 * c.phi1 * sp.h_star) / c.m0;
    b.k_H = std::sqrt(2.0 * b.P);
    return b;
}

double sp_linearization_q(const ModelParams& p, const DerivedCoefficients& c, double tau)
{
    (void)p;
    return std::sqrt(2.0) * (c.tau_c - tau) / c.m0;
}

std::array<std::complex<double>, 3> sp_eigenvalues(const ModelParams& p,
                                                   const DerivedCoefficients& c, double tau)
{
    const BifurcationPoints b = bifurcation_points(p, c);
    const double P = b.P, R = b.R;
    const double Q = sp_linearization_q(p, c, tau);
    // lambda (lambda-Q)^2 + 2P (lambda-Q) - R^2 lambda + 2PR = 0
    // => lambda^3 - 2Q lambda^2 + (Q^2 + 2P - R^2) lambda + 2P(R - Q) = 0
    return solve_cubic(1.0, -2.0 * Q, Q * Q + 2.0 * P - R * R, 2.0 * P * (R - Q));
}

std::array<double, 9> sp_jacobi_matrix(const ModelParams& p, const DerivedCoefficients& c,
                                       double tau)
{
    const BifurcationPoints b = bifurcation_points(p, c);
    const double Q = sp_linearization_q(p, c, tau);
    return {0.0, 1.0, -1.0, -b.P, Q, -b.R, b.P, -b.R, Q};
}

StationaryPulse tp_perturbative(const ModelParams& p, const DerivedCoefficients& c, double tau,
                                int sign)
{
    if (!(c.g3 > c.g3_tilde))
        throw Error("subcritical-regime", "g3 <= g3_tilde: the pitchfork normal form is not supercritical");
    const BifurcationPoints b = bifurcation_points(p, c);
    const double mu = b.tau_d - tau;
    if (mu < 0)
        throw Error("invalid-argument", "tp_perturbative requires tau <= tau_d");

    const double r1c = std::sqrt(std::sqrt(2.0) / (c.g3 - c.g3_tilde));
    const double ph = c.phi1 * c.h0;
    // Proof form: h2 = [num]/(G0 phi2) * (r1c)^2, (r1c)^2 = sqrt(2)/(g3 - g3t).
    const double num = -c.G0 * c.phi2 * c.h0 + c.G1 * c.phi1 * c.h0 + 0.5 * c.G0 * ph * ph;
    const double h2 = num / (c.G0 * c.phi2) * r1c * r1c;

    StationaryPulse tp;
    tp.r_star = sign * r1c * std::sqrt(mu);
    tp.h_star = c.h0 + h2 * mu;
    tp.kind = sign >= 0 ? StationaryPulse::Kind::TPplus : StationaryPulse::Kind::TPminus;
    return tp;
}

std::optional<StationaryPulse> tp_newton(const ModelParams& p, const DerivedCoefficients& c,
                                         double h_guess, double r_guess)
{
    // Two equations in (h, r) with r2 = r1 = r: the velocity equations of the
    // homogeneous 3D system.
    auto F = [&](double h, double r) -> std::array<double, 2> {
        const auto d = rhs_homogeneous3d({h, r, r}, p, c);
        return {d[1], d[2]};
    };

    double h = h_guess, r = r_guess;
    double fnorm = 1e300;
    for (int it = 0; it < 200; ++it) {
        const auto f = F(h, r);
        fnorm = std::max(std::abs(f[0]), std::abs(f[1]));
        if (fnorm < 1e-13)
            break;
        const auto J3 = jacobian_homogeneous3d({h, r, r}, p, c);
        // Chain rule for r2 = r1 = r.
        const double a = J3[3], bb = J3[4] + J3[5];
        const double cc = J3[6], dd = J3[7] + J3[8];
        const double det = a * dd - bb * cc;
        if (std::abs(det) < 1e-300)
            return std::nullopt;
        const double dh = (dd * f[0] - bb * f[1]) / det;
        const double dr = (-cc * f[0] + a * f[1]) / det;
        const double damping = 0.5;
        h -= damping * dh;
        r -= damping * dr;
        if (!(h > 0) || !std::isfinite(h) || !std::isfinite(r))
            return std::nullopt;
    }
    if (fnorm >= 1e-10)
        return std::nullopt;

    StationaryPulse out;
    out.h_star = h;
    out.r_star = r;
    out.kind = (std::abs(r) < 1e-12) ? StationaryPulse::Kind::SP
               : (r > 0 ? StationaryPulse::Kind::TPplus : StationaryPulse::Kind::TPminus);
    return out;
}

InterfaceState incoming_tp_state(const ModelParams& p, const DerivedCoefficients& c, double x_c,
                                 double offset)
{
    StationaryPulse tp;
    try {
        tp = tp_perturbative(p, c, p.tau, +1);
    } catch (const Error&) {
        tp = {c.h0, 0.0, StationaryPulse::Kind::SP};
    }
    if (auto refined = tp_newton(p, c, tp.h_star, std::max(tp.r_star, 1e-3)))
        if (refined->r_star > 0)
            tp = *refined;

    const double dist = offset > 0 ? offset : 30.0 * std::sqrt(p.D);
    const double center = x_c - dist;
    return {center + tp.h_star / 2.0, center - tp.h_star / 2.0, tp.r_star, tp.r_star};
}

FrontVelocities front_velocities(FrontSide side, const ModelParams& p,
                                 const DerivedCoefficients& c)
{
    const double lin = std::sqrt(2.0) * (c.tau_c - p.tau);
    const double d0 = (side == FrontSide::Left) ? p.delta0 : -p.delta0;

    // sqrt(2)(tau_c - tau) r - g3 r^3 + d0 = 0
    const auto roots = real_cubic_roots(-c.g3, 0.0, lin, d0);
    if (roots.size() != 3)
        throw Error("fold-collision", "front-velocity cubic has fewer than 3 real roots");

    FrontVelocities fv;
    fv.r_minus = roots[0];
    fv.r_zero = roots[1];
    fv.r_plus = roots[2];

    // Second-order expansion in delta0 (proof of the front-velocity lemma):
    // outer roots a0 = +-sqrt(lin/g3), a1 = 1/(2 lin), a2 = -+ 3 g3/(16 ...) a0;
    // middle root a1 = -1/lin.
    const double a0 = std::sqrt(lin / c.g3);
    const double a1 = 1.0 / (2.0 * lin);
    const double a2 = 3.0 * c.g3 * a0 / (8.0 * lin * lin * lin);
    fv.approx_plus = a0 + a1 * d0 - a2 * d0 * d0;
    fv.approx_minus = -a0 + a1 * d0 + a2 * d0 * d0;
    fv.approx_zero = -d0 / lin;
    return fv;
}

StationaryFront stationary_front(const ModelParams& p, const DerivedCoefficients& c,
                                 const SharpBump& bump)
{
    const double sD = std::sqrt(p.D);
    const double z0 = std::exp(-bump.d0 / (2.0 * sD));
    const double eps0 = bump.eps0;
    if (!(eps0 <= -p.delta0 / (1.0 - z0)))
        throw Error("no-stationary-front",
                    "eps0 must be <= -delta0/(1 - e^{-d0/(2 sqrt(D))}) for a pinned front");

    const double branch_eps = -2.0 * p.delta0 / (1.0 - z0 * z0);

    StationaryFront sf;
    double zstar;
    if (eps0 >= branch_eps) {
        // Zero of Delta0 inside the bump support: z^2 - 2Az + 1 = 0 with
        // A = (delta0 + eps0)/(eps0 z0); the root in (0, 1].
        const double A = (p.delta0 + eps0) / (eps0 * z0);
        zstar = A - std::sqrt(A * A - 1.0);
        sf.branch = StationaryFront::Branch::Edge;
        sf.p0 = -std::sqrt((p.delta0 + eps0) * (p.delta0 + eps0) - eps0 * z0 * eps0 * z0) /
                (c.m0 * sD);
    } else {
        // Zero beyond the bump edge.
        zstar = -2.0 * z0 * p.delta0 / (eps0 * (1.0 - z0 * z0));
        sf.branch = StationaryFront::Branch::Interior;
        sf.p0 = -p.delta0 / (c.m0 * sD);
    }
    sf.l_star = -sD * std::log(zstar);
    sf.trace = std::sqrt(2.0) * (c.tau_c - p.tau) / c.m0;
    sf.det = -sf.p0;
    sf.unstable = (p.tau < c.tau_c);
    return sf;
}

double stationary_front_eps0(const ModelParams& p, const SharpBump& bump, double l_star)
{
    const double sD = std::sqrt(p.D);
    const double z0 = std::exp(-bump.d0 / (2.0 * sD));
    const double zs = std::exp(-l_star / sD);
    if (zs <= z0) {
        // interior branch: zs = -2 z0 delta0 / (eps0 (1 - z0^2))
        return -2.0 * z0 * p.delta0 / (zs * (1.0 - z0 * z0));
    }
    // edge branch: invert z^2 - 2Az + 1 = 0 for A, then eps0.
    const double A = (zs * zs + 1.0) / (2.0 * zs);
    return p.delta0 / (A * z0 - 1.0);
}

double het_sp_threshold(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump)
{
    const double z0 = std::exp(-bump.d0 / (2.0 * std::sqrt(p.D)));
    return (c.G0 - p.delta0) / (1.0 - z0);
}

namespace {

// f(z) of the centered stationary-pulse balance G0 e^{-h/sqrt(D)} = Delta0(h/2)
// with z = e^{-h/(2 sqrt(D))}.
double het_sp_f(double z, double z0, double G0, double delta0)
{
    const double num = G0 * z * z - delta0;
    if (z >= z0)
        return num / (1.0 - z0 * (z + 1.0 / z) / 2.0);
    return num / (z * (1.0 / z0 - z0) / 2.0);
}

} // namespace

StationaryPulse het_sp(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump)
{
    const double sD = std::sqrt(p.D);
    const double z0 = std::exp(-bump.d0 / (2.0 * sD));
    const double eps0 = bump.eps0;
    if (!(eps0 < het_sp_threshold(p, c, bump)))
        throw Error("no-stationary-pulse", "eps0 at or above the stationary-pulse threshold");

    // f is monotone increasing on (0, 1); bracket then bisect.
    double z_hi = 1.0 - 1e-15;
    double z_lo = std::sqrt(p.delta0 / c.G0);  // f = 0 here for the z >= z0 branch
    while (het_sp_f(z_lo, z0, c.G0, p.delta0) >= eps0) {
        z_lo *= 0.5;
        if (z_lo < 1e-300)
            throw Error("no-stationary-pulse", "failed to bracket the stationary-pulse root");
    }
    if (!(het_sp_f(z_lo, z0, c.G0, p.delta0) < eps0 && eps0 < het_sp_f(z_hi, z0, c.G0, p.delta0)))
        throw Error("no-stationary-pulse", "root bracket invalid");

    while (z_hi - z_lo > 1e-12) {
        const double mid = 0.5 * (z_lo + z_hi);
        if (het_sp_f(mid, z0, c.G0, p.delta0) < eps0)
            z_lo = mid;
        else
            z_hi = mid;
    }
    const double z = 0.5 * (z_lo + z_hi);

    StationaryPulse sp;
    sp.h_star = -2.0 * sD * std::log(z);
    sp.r_star = 0.0;
    sp.kind = StationaryPulse::Kind::SP;
    return sp;
}

std::array<double, 16> fd_jacobian_truncated(const InterfaceState& s, const ModelParams& p,
                                             const DerivedCoefficients& c,
                                             const ResponseProfile& resp)
{
    const double step = 1e-6;
    std::array<double, 16> J{};
    for (int j = 0; j < 4; ++j) {
        InterfaceState sp_ = s, sm = s;
        double* fields_p[4] = {&sp_.l2, &sp_.l1, &sp_.r2, &sp_.r1};
        double* fields_m[4] = {&sm.l2, &sm.l1, &sm.r2, &sm.r1};
        *fields_p[j] += step;
        *fields_m[j] -= step;
        const Deriv4 dp = rhs_truncated(sp_, p, c, resp);
        const Deriv4 dm = rhs_truncated(sm, p, c, resp);
        const double col[4] = {(dp.dl2 - dm.dl2) / (2 * step), (dp.dl1 - dm.dl1) / (2 * step),
                               (dp.dr2 - dm.dr2) / (2 * step), (dp.dr1 - dm.dr1) / (2 * step)};
        for (int i = 0; i < 4; ++i)
            J[i * 4 + j] = col[i];
    }
    return J;
}

std::array<std::complex<double>, 3> eigenvalues3(const std::array<double, 9>& m)
{
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            M(i, j) = m[i * 3 + j];
    Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
    std::array<std::complex<double>, 3> out;
    for (int i = 0; i < 3; ++i)
        out[i] = es.eigenvalues()(i);
    return out;
}

std::array<std::complex<double>, 4> eigenvalues4(const std::array<double, 16>& m)
{
    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            M(i, j) = m[i * 4 + j];
    Eigen::EigenSolver<Eigen::Matrix4d> es(M, false);
    std::array<std::complex<double>, 4> out;
    for (int i = 0; i < 4; ++i)
        out[i] = es.eigenvalues()(i);
    return out;
}

std::optional<double> het_sp_leading_real(const ModelParams& p, const DerivedCoefficients& c,
                                          const SharpBump& bump, double tau)
{
    ModelParams pt = p;
    pt.tau = tau;
    const StationaryPulse sp = het_sp(pt, c, bump);
    const ResponseProfile resp = response_analytic(Heterogeneity{bump}, pt);
    const InterfaceState s{bump.xc + sp.h_star / 2.0, bump.xc - sp.h_star / 2.0, 0.0, 0.0};
    const auto J = fd_jacobian_truncated(s, pt, c, resp);
    const auto ev = eigenvalues4(J);

    bool found = false;
    double lead = -1e300;
    for (const auto& lam : ev) {
        if (std::abs(lam.imag()) > 1e-8 && lam.real() > lead) {
            lead = lam.real();
            found = true;
        }
    }
    if (!found)
        return std::nullopt;
    return lead;
}

double het_hopf_sweep(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump,
                      double tau_lo, double tau_hi, double tol)
{
    auto lead = [&](double tau) -> double {
        const auto v = het_sp_leading_real(p, c, bump, tau);
        if (!v)
            throw Error("no-hopf-found", "no complex eigenvalue pair at tau = " + std::to_string(tau));
        return *v;
    };

    double f_lo = lead(tau_lo);
    double f_hi = lead(tau_hi);
    if (f_lo * f_hi > 0)
        throw Error("no-hopf-found", "leading complex-pair real part has no sign change in range");

    while (tau_hi - tau_lo > tol) {
        const double mid = 0.5 * (tau_lo + tau_hi);
        const double f_mid = lead(mid);
        if (f_mid * f_lo <= 0) {
            tau_hi = mid;
            f_hi = f_mid;
        } else {
            tau_lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (tau_lo + tau_hi);
}

std::optional<LegacyStationaryPulse> legacy_sp(const ModelParams& p, const LegacyCoefficients& lc)
{
    const double sD = std::sqrt(p.D);
    const double tau_c = 1.0 / (4.0 * std::sqrt(2.0 * p.D));

    // Standing pulse: l2' = l1' = 0 forces r2 = -s, r1 = +s with
    // s(h) = M0_tilde e^{-h/sqrt(D)} + delta0 beta1; then r2' = 0 gives
    // g(h) = M1 s^3 - M2 (tau_c - tau) s + M0 e^{-h/sqrt(D)} - delta0 beta2 = 0.
    auto g = [&](double h) {
        const double E = std::exp(-h / sD);
        const double s = lc.M0_tilde * E + p.delta0 * lc.beta1;
        return lc.M1 * s * s * s - lc.M2 * (tau_c - p.tau) * s + lc.M0 * E - p.delta0 * lc.beta2;
    };

    double h_lo = 1e-6, h_hi = 100.0 * sD;
    double g_lo = g(h_lo), g_hi = g(h_hi);
    if (g_lo * g_hi > 0)
        return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (h_lo + h_hi);
        const double gm = g(mid);
        if (gm * g_lo <= 0) {
            h_hi = mid;
            g_hi = gm;
        } else {
            h_lo = mid;
            g_lo = gm;
        }
    }
    LegacyStationaryPulse out;
    out.h_star = 0.5 * (h_lo + h_hi);
    out.r_abs = lc.M0_tilde * std::exp(-out.h_star / sD) + p.delta0 * lc.beta1;
    return out;
}

} // namespace pulsedyn
