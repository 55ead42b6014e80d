#pragma once

#include <array>
#include <complex>
#include <optional>

#include "pulsedyn/model.hpp"
#include "pulsedyn/reduced_ode.hpp"

namespace pulsedyn {

// ---------------------------------------------------------------------------
// Stationary pulses and bifurcation points of the homogeneous system
// ---------------------------------------------------------------------------

struct StationaryPulse {
    enum class Kind { SP, TPplus, TPminus };

    double h_star = 0;
    double r_star = 0;
    Kind kind = Kind::SP;
};

// (h*, 0, 0) with h* = -sqrt(D) log(2 delta0). Throws
// Error("no-stationary-pulse") when delta0 >= 1/2 and
// Error("degenerate-baseline") when delta0 = 0.
StationaryPulse sp_homogeneous(const ModelParams& p, const DerivedCoefficients& c);

struct BifurcationPoints {
    double tau_d = 0;  // pitchfork
    double tau_H = 0;  // Hopf
    double k_H = 0;    // Hopf frequency sqrt(2P)
    double P = 0;      // 2 G0 phi0 delta0 / m0
    double R = 0;      // 2 delta0 (G1 + G0 phi1 h*) / m0
};

BifurcationPoints bifurcation_points(const ModelParams& p, const DerivedCoefficients& c);

// Q(tau) = sqrt(2) (tau_c - tau) / m0, the tau-dependent diagonal entry.
double sp_linearization_q(const ModelParams& p, const DerivedCoefficients& c, double tau);

// Eigenvalues of the SP linearization at the given tau, from the exact cubic
// lambda (lambda-Q)^2 + 2P (lambda-Q) - R^2 lambda + 2PR = 0.
std::array<std::complex<double>, 3> sp_eigenvalues(const ModelParams& p,
                                                   const DerivedCoefficients& c, double tau);

// The explicit 3x3 Jacobi matrix of the SP linearization (row-major), for
// cross-checks against the cubic route.
std::array<double, 9> sp_jacobi_matrix(const ModelParams& p, const DerivedCoefficients& c,
                                       double tau);

// Perturbative traveling pulse near the pitchfork (sign = +1 or -1 picks
// TP+ / TP-). Throws Error("subcritical-regime") when g3 <= g3_tilde.
StationaryPulse tp_perturbative(const ModelParams& p, const DerivedCoefficients& c, double tau,
                                int sign = +1);

// Damped-Newton refinement of a traveling-pulse fixed point (h, r2=r1=r) of
// the homogeneous 3D system; nullopt when Newton fails to converge.
std::optional<StationaryPulse> tp_newton(const ModelParams& p, const DerivedCoefficients& c,
                                         double h_guess, double r_guess);

// Incoming TP+ placed with its center `offset` to the left of x_c
// (default 30 sqrt(D)); Newton-refined when possible.
InterfaceState incoming_tp_state(const ModelParams& p, const DerivedCoefficients& c, double x_c,
                                 double offset = 0.0);

// ---------------------------------------------------------------------------
// Front solutions
// ---------------------------------------------------------------------------

struct FrontVelocities {
    // Exact roots of sqrt(2)(tau_c - tau) r - g3 r^3 +- delta0 = 0.
    double r_plus = 0, r_minus = 0, r_zero = 0;
    // Second-order small-delta0 expansion of the same roots (the paper's
    // reported values).
    double approx_plus = 0, approx_minus = 0, approx_zero = 0;
};

// Throws Error("fold-collision") when the cubic has fewer than 3 real roots.
FrontVelocities front_velocities(FrontSide side, const ModelParams& p,
                                 const DerivedCoefficients& c);

struct StationaryFront {
    enum class Branch { Edge, Interior };

    double l_star = 0;      // root of Delta0 with l* >= 0 (bump-centered frame)
    Branch branch = Branch::Edge;
    double p0 = 0;          // Delta0'(-l*) / m0 (mirror zero, both eigenvalues positive)
    double trace = 0;       // sqrt(2)(tau_c - tau)/m0
    double det = 0;         // -p0
    bool unstable = true;
};

// Heterogeneity-pinned stationary front of the single left-interface system
// for a sharp bump (bump-centered coordinates). Throws
// Error("no-stationary-front") when eps0 > -delta0 / (1 - e^{-d0/(2 sqrt(D))}).
StationaryFront stationary_front(const ModelParams& p, const DerivedCoefficients& c,
                                 const SharpBump& bump);

// eps0 that pins the stationary front at the requested l_star (inverse of the
// interior-branch formula).
double stationary_front_eps0(const ModelParams& p, const SharpBump& bump, double l_star);

// ---------------------------------------------------------------------------
// Heterogeneity-induced stationary pulse and Hopf detection
// ---------------------------------------------------------------------------

// Unique centered stationary pulse for a sharp bump; monotone bisection of
// eps0 = f(z). Throws Error("no-stationary-pulse") above the threshold
// (G0 - delta0)/(1 - e^{-d0/(2 sqrt(D))}).
StationaryPulse het_sp(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump);

double het_sp_threshold(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump);

// 4D Jacobian of rhs_truncated at the given state by central differences
// (step 1e-6), row-major in (l2, l1, r2, r1).
std::array<double, 16> fd_jacobian_truncated(const InterfaceState& s, const ModelParams& p,
                                             const DerivedCoefficients& c,
                                             const ResponseProfile& resp);

// Real part of the leading complex eigenvalue pair (|Im| > 1e-8) of the
// centered stationary pulse at the given tau; nullopt when no complex pair.
std::optional<double> het_sp_leading_real(const ModelParams& p, const DerivedCoefficients& c,
                                          const SharpBump& bump, double tau);

// Bisects tau in [tau_lo, tau_hi] for the zero crossing of the leading
// complex-pair real part. Throws Error("no-hopf-found") without a sign change.
double het_hopf_sweep(const ModelParams& p, const DerivedCoefficients& c, const SharpBump& bump,
                      double tau_lo, double tau_hi, double tol = 1e-6);

// Eigenvalues of a small dense real matrix (numeric QR route; oracle side of
// the dual eigenvalue check).
std::array<std::complex<double>, 3> eigenvalues3(const std::array<double, 9>& m);
std::array<std::complex<double>, 4> eigenvalues4(const std::array<double, 16>& m);

// ---------------------------------------------------------------------------
// Legacy-model stationary pulse (baseline comparison)
// ---------------------------------------------------------------------------

struct LegacyStationaryPulse {
    double h_star = 0;
    double r_abs = 0;  // stationary |r1| = |r2| (r2 = -r_abs, r1 = +r_abs)
};

// Root-solve of the legacy stationary condition; nullopt if no root in range.
std::optional<LegacyStationaryPulse> legacy_sp(const ModelParams& p, const LegacyCoefficients& lc);

} // namespace pulsedyn
