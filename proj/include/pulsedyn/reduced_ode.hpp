#pragma once

#include <array>
#include <string>
#include <vector>

#include "pulsedyn/model.hpp"

namespace pulsedyn {

// ---------------------------------------------------------------------------
// States and variants
// ---------------------------------------------------------------------------

struct InterfaceState {
    double l2 = 0, l1 = 0;  // interface positions, l2 > l1
    double r2 = 0, r1 = 0;  // interface velocities

    double h() const { return l2 - l1; }
    double center() const { return 0.5 * (l2 + l1); }
};

struct Deriv4 {
    double dl2 = 0, dl1 = 0, dr2 = 0, dr1 = 0;
};

// Coefficients of the earlier weak-interaction reduction used as a baseline.
struct LegacyCoefficients {
    double M0, M0_tilde, beta1, beta2, M1, M2;

    static LegacyCoefficients defaults(double D);
};

struct OdeVariant {
    enum class Kind { FullRenormalized, Truncated, LegacyWeakInteraction };

    Kind kind = Kind::Truncated;
    LegacyCoefficients legacy{};     // LegacyWeakInteraction only
    // Truncated only: drop the velocity dependence of the interaction
    // (G1 = 0 and exponent phi0*h), i.e. the plain +-G0 e^{-h/sqrt(D)} form.
    bool simple_interaction = false;

    static OdeVariant full() { return {Kind::FullRenormalized, {}, false}; }
    static OdeVariant truncated() { return {Kind::Truncated, {}, false}; }
    static OdeVariant legacy_defaults(double D)
    {
        return {Kind::LegacyWeakInteraction, LegacyCoefficients::defaults(D), false};
    }
};

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

// Mass-matrix coupled system; the 2x2 linear solve is done analytically
// (Cramer). det_out receives the determinant when non-null. Throws
// Error("mass-matrix-singular") when |det| <= 1e-12.
Deriv4 rhs_full(const InterfaceState& s, const ModelParams& p, const DerivedCoefficients& c,
                const ResponseProfile& resp, double* det_out = nullptr);

Deriv4 rhs_truncated(const InterfaceState& s, const ModelParams& p, const DerivedCoefficients& c,
                     const ResponseProfile& resp, bool simple_interaction = false);

// Homogeneous 3D reduction, s3 = {h, r2, r1}.
std::array<double, 3> rhs_homogeneous3d(const std::array<double, 3>& s3, const ModelParams& p,
                                        const DerivedCoefficients& c);

// Analytic Jacobian of rhs_homogeneous3d at s3 (row-major 3x3).
std::array<double, 9> jacobian_homogeneous3d(const std::array<double, 3>& s3,
                                             const ModelParams& p, const DerivedCoefficients& c);

enum class FrontSide { Left, Right };

// Single-front equations, s1 = {l, r}: m0 r' = sqrt(2)(tau_c - tau) r - g3 r^3
// + Delta0(l) for the left front, - Delta0(l) for the right front.
std::array<double, 2> rhs_single_front(FrontSide side, const std::array<double, 2>& s1,
                                       const ModelParams& p, const DerivedCoefficients& c,
                                       const ResponseProfile& resp);

Deriv4 rhs_legacy(const InterfaceState& s, const ModelParams& p, const LegacyCoefficients& lc);

// ---------------------------------------------------------------------------
// Time integration
// ---------------------------------------------------------------------------

struct TrajectoryEvent {
    double t;
    std::string kind;
    double position;
};

enum class Termination { Completed, Decomposed, InterfacesMerged, MassMatrixSingular, DomainExit };

const char* termination_name(Termination t);

struct Trajectory {
    std::vector<double> times;
    std::vector<InterfaceState> states;
    std::vector<TrajectoryEvent> events;
    Termination termination = Termination::Completed;
};

struct IntegratorConfig {
    enum class Method { Rk4Fixed, Rk45Adaptive };

    double dt = 0.01;
    double t_end = 1500.0;
    Method method = Method::Rk4Fixed;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double h_blowup = 0.0;   // 0 -> 50 sqrt(D)
    int record_stride = 10;
    // Optional early stop for sweeps: stop once |center - x_ref| > stop_radius
    // with the pulse moving away. 0 disables.
    double stop_radius = 0.0;
    double x_ref = 0.0;
};

// Integrates a 4D variant from s0. Records every record_stride accepted steps
// (plus the final state), latches edge-crossing events against `edges`, and
// terminates early on pulse decomposition (h > h_blowup), interface merging
// (h <= 0) or a singular mass matrix. Throws Error("stiffness-failure") on
// adaptive step-size underflow.
Trajectory integrate(const OdeVariant& variant, InterfaceState s0, const ModelParams& p,
                     const DerivedCoefficients& c, const ResponseProfile& resp,
                     const IntegratorConfig& cfg, const std::vector<double>& edges = {});

// Generic fixed-step RK4 helpers for the low-dimensional systems (tests,
// Newton seeding). Rhs: std::array<double,N> f(const std::array<double,N>&).
template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double dt, Rhs&& rhs)
{
    std::array<double, N> k1 = rhs(y), tmp;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + 0.5 * dt * k1[i];
    std::array<double, N> k2 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + 0.5 * dt * k2[i];
    std::array<double, N> k3 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + dt * k3[i];
    std::array<double, N> k4 = rhs(tmp);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Standing-pulse initial state (h*, 0, 0) centered at `center`; `perturb` is
// added to both interface positions symmetrically (widens the pulse).
InterfaceState make_sp_state(const ModelParams& p, const DerivedCoefficients& c, double center,
                             double perturb = 0.0);

} // namespace pulsedyn
