#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pulsedyn/model.hpp"
#include "pulsedyn/reduced_ode.hpp"

namespace pulsedyn {

// Reference finite-difference simulator of the full two-component system,
// semi-implicit (Crank-Nicolson diffusion, explicit reaction), periodic.

struct PdeConfig {
    double x_lo = 0.0, x_hi = 120.0;
    double dx = 0.025;
    double dt = 0.0025;
    double t_end = 1000.0;
    int record_stride = 400;
    std::vector<double> snapshot_times;
};

struct PdeState {
    double x_lo = 0.0, dx = 0.025;
    std::vector<double> u, v;
    double t = 0.0;

    double x(std::size_t i) const { return x_lo + dx * static_cast<double>(i); }
};

// f = (u + 1/2)(1/2 - u)(u - v/2)
inline double reaction_f(double u, double v)
{
    return (u + 0.5) * (0.5 - u) * (u - 0.5 * v);
}

// g = u - v + delta(x)
inline double reaction_g(double u, double v, double delta_x)
{
    return u - v + delta_x;
}

// tanh fronts of width ~epsilon at (l1, l2); v initialized to the hybrid
// stationary field for that width.
PdeState make_pde_initial(const ModelParams& p, const Heterogeneity& het, const PdeConfig& cfg,
                          double l1, double l2);

class PdeStepper {
public:
    PdeStepper(const ModelParams& p, const Heterogeneity& het, const PdeConfig& cfg);

    // Throws Error("blowup") when |u| exceeds 1.5.
    void step(PdeState& s) const;

private:
    const ModelParams p_;
    PdeConfig cfg_;
    std::vector<double> delta_;
    double alpha_u_, alpha_v_;  // CN diffusion numbers
    mutable std::vector<double> rhs_, work1_, work2_, work3_;
};

// Zero crossings of u, linearly interpolated; nullopt unless exactly two.
std::optional<std::pair<double, double>> extract_interfaces(const PdeState& s);

// Interface trajectory; velocities estimated by finite differences of the
// recorded positions. Records an "interface-count" event and stops when the
// crossing count leaves 2.
Trajectory run_pde(PdeState s0, const ModelParams& p, const Heterogeneity& het,
                   const PdeConfig& cfg,
                   const std::function<void(const PdeState&)>& on_snapshot = {});

} // namespace pulsedyn
