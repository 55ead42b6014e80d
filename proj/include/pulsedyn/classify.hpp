#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pulsedyn/analysis.hpp"
#include "pulsedyn/model.hpp"
#include "pulsedyn/reduced_ode.hpp"

namespace pulsedyn {

// ---------------------------------------------------------------------------
// Homogeneous behavior (SP / SB / TB / TP)
// ---------------------------------------------------------------------------

enum class BehaviorClass { SP, SB, TB, TPplus, TPminus, Unresolved };

const char* behavior_name(BehaviorClass b);

struct ClassifyConfig {
    double transient_skip = 500.0;
    double window = 1000.0;
    double v_tol_factor = 0.05;  // of the TP velocity scale
    double a_tol_factor = 0.02;  // of h*
};

// Center-drift speed vs width-oscillation amplitude over the analysis window.
// Unresolved when the two window halves classify differently.
BehaviorClass classify_homogeneous(const Trajectory& traj, const ModelParams& p,
                                   const DerivedCoefficients& c, const ClassifyConfig& cfg = {});

// ---------------------------------------------------------------------------
// Scattering at a localized heterogeneity (PEN / REB / DEC1 / DEC2)
// ---------------------------------------------------------------------------

enum class ScatterLabel { PEN, REB, DEC1, DEC2, Unresolved };

const char* scatter_name(ScatterLabel s);
ScatterLabel scatter_from_name(const std::string& name);

struct ScatterOutcome {
    ScatterLabel label = ScatterLabel::Unresolved;
    double turning_point = 0;  // left-interface turning point (DEC only)
};

// Classifies a trajectory started from an incoming TP+ left of the
// heterogeneity. DEC1 vs DEC2 by the left-interface turning point relative to
// the left bump edge (margin 0.5 sqrt(D) inside).
ScatterOutcome classify_scattering(const Trajectory& traj, const Heterogeneity& het,
                                   const ModelParams& p, const DerivedCoefficients& c);

// ---------------------------------------------------------------------------
// Phase diagrams
// ---------------------------------------------------------------------------

struct PhaseBoundary {
    double d0;
    double eps_star;
    std::string kind;  // e.g. "PEN-DEC1"
};

struct PhaseDiagram {
    std::vector<double> d0;    // axis 1
    std::vector<double> eps0;  // axis 2
    std::vector<ScatterLabel> labels;  // row-major, labels[i*eps0.size()+j]
    std::vector<PhaseBoundary> boundaries;

    ScatterLabel at(std::size_t i, std::size_t j) const { return labels[i * eps0.size() + j]; }
};

struct SweepConfig {
    IntegratorConfig integ{};     // per-cell integration (t_end, dt, ...)
    double xc = 0.0;              // bump center
    int jobs = 1;                 // 1 = serial reference path, >1 = OpenMP
    bool refine = false;          // bisect boundaries along eps0
    double bisect_tol = 1e-5;     // in eps0
    double bisect_t_end = 20000;  // probes near boundaries need long horizons
};

// Classifies every (d0, eps0) cell of a sharp-bump scattering experiment.
// Output is independent of jobs (cells are gathered by index).
PhaseDiagram sweep_phase_diagram(const std::vector<double>& d0s, const std::vector<double>& eps0s,
                                 const ModelParams& p, const DerivedCoefficients& c,
                                 const SweepConfig& cfg);

// One scattering run at (d0, eps0): incoming TP+, integrate, classify.
ScatterOutcome run_scatter_cell(double d0, double eps0, const ModelParams& p,
                                const DerivedCoefficients& c, const SweepConfig& cfg,
                                double t_end_override = 0.0);

// Bisects the eps0 boundary between two differently-labeled runs at fixed d0.
PhaseBoundary bisect_boundary(double d0, double eps_lo, double eps_hi, const ModelParams& p,
                              const DerivedCoefficients& c, const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Residence time and trapping
// ---------------------------------------------------------------------------

// Time from the first instant both interfaces are inside the heterogeneity
// support until the first interface exit. Throws Error("no-entry") when the
// pulse never fully enters.
double residence_time(const Trajectory& traj, const Heterogeneity& het);

enum class TrapResult { Trapped, EscapedLeft, EscapedRight };

const char* trap_name(TrapResult t);

// Trapped iff both interfaces stay inside the square-well outer extent
// [xc - d0/2 - d1, xc + d0/2 + d1] from entry to the end of the horizon.
TrapResult trap_check(const Trajectory& traj, const SquareWell& well);

} // namespace pulsedyn
