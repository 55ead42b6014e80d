#include "pulsedyn/reduced_ode.hpp"

#include <cmath>

#include "pulsedyn/error.hpp"

namespace pulsedyn {

LegacyCoefficients LegacyCoefficients::defaults(double D)
{
    const double sD = std::sqrt(D);
    return {8.0 * sD / 3.0, 20.0 * sD / 9.0, 8.0 * sD / 9.0, 16.0 * sD / 3.0,
            1.0 / (6.0 * D), 16.0 * std::sqrt(2.0 * D) / 3.0};
}

Deriv4 rhs_full(const InterfaceState& s, const ModelParams& p, const DerivedCoefficients& c,
                const ResponseProfile& resp, double* det_out)
{
    (void)c;
    const double D = p.D;
    const double h = s.h();

    // E1 couples the left interface into the right equation and vice versa.
    const double E1 = std::exp(-(s.r1 + phi_kin(s.r1, D)) / (2.0 * D) * h);
    const double E2 = std::exp(-(-s.r2 + phi_kin(s.r2, D)) / (2.0 * D) * h);

    const Prefactors f2 = prefactors(s.r2, h, p);
    const Prefactors f1 = prefactors(s.r1, h, p);
    const Prefactors f1n = prefactors(-s.r1, h, p);  // G(-r1)

    const double a = f2.m;        // m(r2)
    const double b = f1.M * E1;   // M(r1,h) E1
    const double cc = f2.M * E2;  // M(r2,h) E2
    const double d = f1.m;        // m(r1)

    const double R2 = f2.g + f1n.G * E1 - resp(s.l2);
    const double R1 = f1.g - f2.G * E2 + resp(s.l1);

    const double det = a * d - b * cc;
    if (det_out)
        *det_out = det;
    if (std::abs(det) <= 1e-12)
        throw Error("mass-matrix-singular", "mass-matrix determinant <= 1e-12");

    Deriv4 out;
    out.dl2 = s.r2;
    out.dl1 = s.r1;
    out.dr2 = (d * R2 + b * R1) / det;
    out.dr1 = (a * R1 + cc * R2) / det;
    return out;
}

Deriv4 rhs_truncated(const InterfaceState& s, const ModelParams& p, const DerivedCoefficients& c,
                     const ResponseProfile& resp, bool simple_interaction)
{
    const double D = p.D;
    const double h = s.h();
    const double lin = std::sqrt(2.0) * (c.tau_c - p.tau);

    double E1, E2, G1;
    if (simple_interaction) {
        E1 = E2 = std::exp(-c.phi0 * h);
        G1 = 0.0;
    } else {
        E1 = std::exp(-(s.r1 + phi_kin(s.r1, D)) / (2.0 * D) * h);
        E2 = std::exp(-(-s.r2 + phi_kin(s.r2, D)) / (2.0 * D) * h);
        G1 = c.G1;
    }

    Deriv4 out;
    out.dl2 = s.r2;
    out.dl1 = s.r1;
    out.dr2 = (lin * s.r2 - c.g3 * s.r2 * s.r2 * s.r2 + (c.G0 - G1 * s.r1) * E1 - resp(s.l2)) / c.m0;
    out.dr1 = (lin * s.r1 - c.g3 * s.r1 * s.r1 * s.r1 - (c.G0 + G1 * s.r2) * E2 + resp(s.l1)) / c.m0;
    return out;
}

std::array<double, 3> rhs_homogeneous3d(const std::array<double, 3>& s3, const ModelParams& p,
                                        const DerivedCoefficients& c)
{
    const double D = p.D;
    const double h = s3[0], r2 = s3[1], r1 = s3[2];
    const double lin = std::sqrt(2.0) * (c.tau_c - p.tau);
    const double E1 = std::exp(-(r1 + phi_kin(r1, D)) / (2.0 * D) * h);
    const double E2 = std::exp(-(-r2 + phi_kin(r2, D)) / (2.0 * D) * h);
    return {
        r2 - r1,
        (lin * r2 - c.g3 * r2 * r2 * r2 + (c.G0 - c.G1 * r1) * E1 - p.delta0) / c.m0,
        (lin * r1 - c.g3 * r1 * r1 * r1 - (c.G0 + c.G1 * r2) * E2 + p.delta0) / c.m0,
    };
}

std::array<double, 9> jacobian_homogeneous3d(const std::array<double, 3>& s3,
                                             const ModelParams& p, const DerivedCoefficients& c)
{
    const double D = p.D;
    const double h = s3[0], r2 = s3[1], r1 = s3[2];
    const double lin = std::sqrt(2.0) * (c.tau_c - p.tau);

    const double Phi1 = Phi_kin(r1, D);
    const double Phi2n = Phi_kin(-r2, D);
    const double E1 = std::exp(-Phi1 * h);
    const double E2 = std::exp(-Phi2n * h);
    // d/dr Phi(r) = (1 + r/phi(r)) / (2D)
    const double dPhi1 = (1.0 + r1 / phi_kin(r1, D)) / (2.0 * D);
    const double dPhi2n = (1.0 - r2 / phi_kin(r2, D)) / (2.0 * D);

    std::array<double, 9> J{};
    // dh' = r2 - r1
    J[0] = 0.0;
    J[1] = 1.0;
    J[2] = -1.0;
    // r2' row
    J[3] = -(c.G0 - c.G1 * r1) * Phi1 * E1 / c.m0;
    J[4] = (lin - 3.0 * c.g3 * r2 * r2) / c.m0;
    J[5] = (-c.G1 - (c.G0 - c.G1 * r1) * dPhi1 * h) * E1 / c.m0;
    // r1' row
    J[6] = (c.G0 + c.G1 * r2) * Phi2n * E2 / c.m0;
    J[7] = (-c.G1 + (c.G0 + c.G1 * r2) * dPhi2n * h) * E2 / c.m0;
    J[8] = (lin - 3.0 * c.g3 * r1 * r1) / c.m0;
    return J;
}

std::array<double, 2> rhs_single_front(FrontSide side, const std::array<double, 2>& s1,
                                       const ModelParams& p, const DerivedCoefficients& c,
                                       const ResponseProfile& resp)
{
    const double l = s1[0], r = s1[1];
    const double lin = std::sqrt(2.0) * (c.tau_c - p.tau);
    const double sign = (side == FrontSide::Left) ? 1.0 : -1.0;
    return {r, (lin * r - c.g3 * r * r * r + sign * resp(l)) / c.m0};
}

Deriv4 rhs_legacy(const InterfaceState& s, const ModelParams& p, const LegacyCoefficients& lc)
{
    const double E = std::exp(-s.h() / std::sqrt(p.D));
    const double drift = lc.M0_tilde * E + p.delta0 * lc.beta1;
    const double tau_c = 1.0 / (4.0 * std::sqrt(2.0 * p.D));

    Deriv4 out;
    out.dl2 = s.r2 + drift;
    out.dl1 = s.r1 - drift;
    out.dr2 = -lc.M1 * s.r2 * s.r2 * s.r2 + lc.M2 * (tau_c - p.tau) * s.r2 + lc.M0 * E
              - p.delta0 * lc.beta2;
    out.dr1 = -lc.M1 * s.r1 * s.r1 * s.r1 + lc.M2 * (tau_c - p.tau) * s.r1 - lc.M0 * E
              + p.delta0 * lc.beta2;
    return out;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

const char* termination_name(Termination t)
{
    switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Decomposed: return "decomposed";
    case Termination::InterfacesMerged: return "interfaces-merged";
    case Termination::MassMatrixSingular: return "mass-matrix-singular";
    case Termination::DomainExit: return "domain-exit";
    }
    return "unknown";
}

namespace {

struct Rhs4 {
    const OdeVariant& variant;
    const ModelParams& p;
    const DerivedCoefficients& c;
    const ResponseProfile& resp;

    Deriv4 operator()(const InterfaceState& s) const
    {
        switch (variant.kind) {
        case OdeVariant::Kind::FullRenormalized:
            return rhs_full(s, p, c, resp);
        case OdeVariant::Kind::Truncated:
            return rhs_truncated(s, p, c, resp, variant.simple_interaction);
        case OdeVariant::Kind::LegacyWeakInteraction:
            return rhs_legacy(s, p, variant.legacy);
        }
        return {};
    }
};

InterfaceState axpy(const InterfaceState& s, double a, const Deriv4& d)
{
    return {s.l2 + a * d.dl2, s.l1 + a * d.dl1, s.r2 + a * d.dr2, s.r1 + a * d.dr1};
}

InterfaceState rk4_step4(const InterfaceState& s, double dt, const Rhs4& rhs)
{
    const Deriv4 k1 = rhs(s);
    const Deriv4 k2 = rhs(axpy(s, dt / 2.0, k1));
    const Deriv4 k3 = rhs(axpy(s, dt / 2.0, k2));
    const Deriv4 k4 = rhs(axpy(s, dt, k3));
    InterfaceState out = s;
    out.l2 += dt / 6.0 * (k1.dl2 + 2.0 * k2.dl2 + 2.0 * k3.dl2 + k4.dl2);
    out.l1 += dt / 6.0 * (k1.dl1 + 2.0 * k2.dl1 + 2.0 * k3.dl1 + k4.dl1);
    out.r2 += dt / 6.0 * (k1.dr2 + 2.0 * k2.dr2 + 2.0 * k3.dr2 + k4.dr2);
    out.r1 += dt / 6.0 * (k1.dr1 + 2.0 * k2.dr1 + 2.0 * k3.dr1 + k4.dr1);
    return out;
}

bool finite(const InterfaceState& s)
{
    return std::isfinite(s.l2) && std::isfinite(s.l1) && std::isfinite(s.r2) &&
           std::isfinite(s.r1);
}

// Dormand-Prince 5(4) pair.
struct Dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

} // namespace

Trajectory integrate(const OdeVariant& variant, InterfaceState s0, const ModelParams& p,
                     const DerivedCoefficients& c, const ResponseProfile& resp,
                     const IntegratorConfig& cfg, const std::vector<double>& edges)
{
    if (!(cfg.dt > 0) || !(cfg.t_end > 0))
        throw Error("inconsistent-config", "integrator requires dt > 0 and t_end > 0");
    const double h_blowup = cfg.h_blowup > 0 ? cfg.h_blowup : 50.0 * std::sqrt(p.D);
    if (h_blowup <= s0.h())
        throw Error("inconsistent-config", "h_blowup must exceed the initial pulse width");
    if (!(s0.h() > 0))
        throw Error("invalid-argument", "initial state must have l2 > l1");

    const Rhs4 rhs{variant, p, c, resp};

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    double t = 0.0;
    InterfaceState s = s0;
    long step_index = 0;
    double dt_adaptive = cfg.dt;

    auto record = [&](double tt, const InterfaceState& ss) {
        traj.times.push_back(tt);
        traj.states.push_back(ss);
    };

    auto check_events = [&](double t0, const InterfaceState& a, double t1,
                            const InterfaceState& b) {
        for (const double e : edges) {
            if ((a.l1 - e) * (b.l1 - e) < 0.0) {
                const double w = (e - a.l1) / (b.l1 - a.l1);
                traj.events.push_back({t0 + w * (t1 - t0), "l1-cross", e});
            }
            if ((a.l2 - e) * (b.l2 - e) < 0.0) {
                const double w = (e - a.l2) / (b.l2 - a.l2);
                traj.events.push_back({t0 + w * (t1 - t0), "l2-cross", e});
            }
        }
    };

    // Returns true when integration should stop after this accepted step.
    auto accept = [&](double t_new, const InterfaceState& s_new) -> bool {
        if (!finite(s_new))
            throw Error("non-finite-state", "state became non-finite at t = " + std::to_string(t_new));
        check_events(t, s, t_new, s_new);
        t = t_new;
        s = s_new;
        ++step_index;
        if (s.h() > h_blowup) {
            traj.events.push_back({t, "decomposed", s.h()});
            traj.termination = Termination::Decomposed;
            return true;
        }
        if (s.h() <= 0.0) {
            traj.events.push_back({t, "interfaces-merged", s.center()});
            traj.termination = Termination::InterfacesMerged;
            return true;
        }
        if (cfg.stop_radius > 0.0) {
            const double off = s.center() - cfg.x_ref;
            if (std::abs(off) > cfg.stop_radius && off * (s.r2 + s.r1) > 0.0)
                return true;
        }
        if (step_index % cfg.record_stride == 0)
            record(t, s);
        return false;
    };

    auto finish = [&]() {
        if (traj.times.back() != t)
            record(t, s);
        return traj;
    };

    if (cfg.method == IntegratorConfig::Method::Rk4Fixed) {
        const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
        for (long i = 0; i < n_steps; ++i) {
            const double dt = std::min(cfg.dt, cfg.t_end - t);
            InterfaceState s_new;
            try {
                s_new = rk4_step4(s, dt, rhs);
            } catch (const Error& e) {
                if (e.kind() == "mass-matrix-singular") {
                    traj.events.push_back({t, "mass-matrix-singular", s.h()});
                    traj.termination = Termination::MassMatrixSingular;
                    return finish();
                }
                throw;
            }
            if (accept(t + dt, s_new))
                return finish();
        }
        return finish();
    }

    // Adaptive RK45 (Dormand-Prince) with a standard step controller.
    const double dt_min = cfg.dt * 1e-10;
    while (t < cfg.t_end - 1e-12) {
        double dt = std::min(dt_adaptive, cfg.t_end - t);
        if (dt < dt_min)
            throw Error("stiffness-failure", "adaptive step size underflow at t = " + std::to_string(t));

        Deriv4 k1, k2, k3, k4, k5, k6, k7;
        InterfaceState s5;
        try {
            k1 = rhs(s);
            k2 = rhs(axpy(s, dt * Dopri::a21, k1));
            {
                InterfaceState tmp = axpy(s, dt * Dopri::a31, k1);
                tmp = axpy(tmp, dt * Dopri::a32, k2);
                k3 = rhs(tmp);
            }
            {
                InterfaceState tmp = axpy(s, dt * Dopri::a41, k1);
                tmp = axpy(tmp, dt * Dopri::a42, k2);
                tmp = axpy(tmp, dt * Dopri::a43, k3);
                k4 = rhs(tmp);
            }
            {
                InterfaceState tmp = axpy(s, dt * Dopri::a51, k1);
                tmp = axpy(tmp, dt * Dopri::a52, k2);
                tmp = axpy(tmp, dt * Dopri::a53, k3);
                tmp = axpy(tmp, dt * Dopri::a54, k4);
                k5 = rhs(tmp);
            }
            {
                InterfaceState tmp = axpy(s, dt * Dopri::a61, k1);
                tmp = axpy(tmp, dt * Dopri::a62, k2);
                tmp = axpy(tmp, dt * Dopri::a63, k3);
                tmp = axpy(tmp, dt * Dopri::a64, k4);
                tmp = axpy(tmp, dt * Dopri::a65, k5);
                k6 = rhs(tmp);
            }
            s5 = axpy(s, dt * Dopri::b1, k1);
            s5 = axpy(s5, dt * Dopri::b3, k3);
            s5 = axpy(s5, dt * Dopri::b4, k4);
            s5 = axpy(s5, dt * Dopri::b5, k5);
            s5 = axpy(s5, dt * Dopri::b6, k6);
            k7 = rhs(s5);
        } catch (const Error& e) {
            if (e.kind() == "mass-matrix-singular") {
                traj.events.push_back({t, "mass-matrix-singular", s.h()});
                traj.termination = Termination::MassMatrixSingular;
                return finish();
            }
            throw;
        }

        const double err_l2 = dt * (Dopri::e1 * k1.dl2 + Dopri::e3 * k3.dl2 + Dopri::e4 * k4.dl2 +
                                    Dopri::e5 * k5.dl2 + Dopri::e6 * k6.dl2 + Dopri::e7 * k7.dl2);
        const double err_l1 = dt * (Dopri::e1 * k1.dl1 + Dopri::e3 * k3.dl1 + Dopri::e4 * k4.dl1 +
                                    Dopri::e5 * k5.dl1 + Dopri::e6 * k6.dl1 + Dopri::e7 * k7.dl1);
        const double err_r2 = dt * (Dopri::e1 * k1.dr2 + Dopri::e3 * k3.dr2 + Dopri::e4 * k4.dr2 +
                                    Dopri::e5 * k5.dr2 + Dopri::e6 * k6.dr2 + Dopri::e7 * k7.dr2);
        const double err_r1 = dt * (Dopri::e1 * k1.dr1 + Dopri::e3 * k3.dr1 + Dopri::e4 * k4.dr1 +
                                    Dopri::e5 * k5.dr1 + Dopri::e6 * k6.dr1 + Dopri::e7 * k7.dr1);

        auto scaled = [&](double err, double y0, double y1) {
            return std::abs(err) / (cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0), std::abs(y1)));
        };
        double err = std::max({scaled(err_l2, s.l2, s5.l2), scaled(err_l1, s.l1, s5.l1),
                               scaled(err_r2, s.r2, s5.r2), scaled(err_r1, s.r1, s5.r1)});
        if (err <= 1.0) {
            if (accept(t + dt, s5))
                return finish();
        }
        const double factor = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        dt_adaptive = dt * std::clamp(factor, 0.2, 5.0);
    }
    return finish();
}

InterfaceState make_sp_state(const ModelParams& p, const DerivedCoefficients& c, double center,
                             double perturb)
{
    const double h = c.h0 + 2.0 * perturb;
    return {center + h / 2.0, center - h / 2.0, 0.0, 0.0};
}

} // namespace pulsedyn
