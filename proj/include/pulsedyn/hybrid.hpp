#pragma once

#include <functional>
#include <vector>

#include "pulsedyn/model.hpp"
#include "pulsedyn/reduced_ode.hpp"

namespace pulsedyn {

// Mixed ODE-PDE tier: interface ODEs coupled to the diffusion field v by the
// method of lines, Crank-Nicolson diffusion and explicit reaction.

struct HybridConfig {
    enum class Boundary { Periodic, NoFlux };

    double x_lo = 0.0, x_hi = 120.0;
    double dx = 0.05;
    double dt = 0.0025;
    double t_end = 1600.0;
    Boundary boundary = Boundary::Periodic;
    int record_stride = 400;  // record every stride steps (1 time unit default)
    std::vector<double> snapshot_times;
};

struct FieldState {
    double x_lo = 0.0, dx = 0.05;
    std::vector<double> v;
    double l1 = 0.0, l2 = 0.0;
    double t = 0.0;

    double x(std::size_t i) const { return x_lo + dx * static_cast<double>(i); }
    double interp(double xq) const;  // linear interpolation of v
};

// Indicator profile of the u component: +1/2 on (l1, l2], -1/2 elsewhere.
double u_indicator(double x, double l2, double l1);

// Analytic stationary field for interfaces at (l1, l2):
// v = Delta0(x) - 1/2 + box_response(x; l1, l2).
FieldState make_hybrid_initial(const ModelParams& p, const Heterogeneity& het,
                               const HybridConfig& cfg, double l1, double l2);

class HybridStepper {
public:
    HybridStepper(const ModelParams& p, const Heterogeneity& het, const HybridConfig& cfg);

    // One semi-implicit step: field first, then the interfaces from the
    // updated field. Throws Error("domain-exit") when an interface leaves the
    // domain and Error("interfaces-merged") when l2 - l1 < dx.
    void step(FieldState& s) const;

private:
    const ModelParams p_;
    HybridConfig cfg_;
    std::vector<double> delta_;  // delta(x) samples
    double alpha_;               // D dt / (2 dx^2)
    mutable std::vector<double> rhs_, work1_, work2_, work3_;

    void solve_diffusion(std::vector<double>& v) const;
};

// Repeated stepping with interface recording (velocities -v(l2)/(sqrt(2) tau),
// +v(l1)/(sqrt(2) tau)). Early termination latches "domain-exit" /
// "interfaces-merged" events instead of throwing.
Trajectory run_hybrid(FieldState s0, const ModelParams& p, const Heterogeneity& het,
                      const HybridConfig& cfg,
                      const std::function<void(const FieldState&)>& on_snapshot = {});

} // namespace pulsedyn
