#include "pulsedyn/classify.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pulsedyn/error.hpp"

namespace pulsedyn {

const char* behavior_name(BehaviorClass b)
{
    switch (b) {
    case BehaviorClass::SP: return "SP";
    case BehaviorClass::SB: return "SB";
    case BehaviorClass::TB: return "TB";
    case BehaviorClass::TPplus: return "TP+";
    case BehaviorClass::TPminus: return "TP-";
    case BehaviorClass::Unresolved: return "unresolved";
    }
    return "unresolved";
}

const char* scatter_name(ScatterLabel s)
{
    switch (s) {
    case ScatterLabel::PEN: return "PEN";
    case ScatterLabel::REB: return "REB";
    case ScatterLabel::DEC1: return "DEC1";
    case ScatterLabel::DEC2: return "DEC2";
    case ScatterLabel::Unresolved: return "unresolved";
    }
    return "unresolved";
}

ScatterLabel scatter_from_name(const std::string& name)
{
    if (name == "PEN") return ScatterLabel::PEN;
    if (name == "REB") return ScatterLabel::REB;
    if (name == "DEC1") return ScatterLabel::DEC1;
    if (name == "DEC2") return ScatterLabel::DEC2;
    return ScatterLabel::Unresolved;
}

const char* trap_name(TrapResult t)
{
    switch (t) {
    case TrapResult::Trapped: return "trapped";
    case TrapResult::EscapedLeft: return "escaped-left";
    case TrapResult::EscapedRight: return "escaped-right";
    }
    return "unresolved";
}

// ---------------------------------------------------------------------------
// Homogeneous classifier
// ---------------------------------------------------------------------------

namespace {

struct WindowStats {
    double drift;      // |least-squares slope of the pulse center|
    double drift_sign; // sign of the slope
    double amp;        // half peak-to-peak of h
};

WindowStats window_stats(const Trajectory& traj, std::size_t i0, std::size_t i1)
{
    double st = 0, sc = 0, stt = 0, stc = 0;
    double hmin = 1e300, hmax = -1e300;
    const double n = static_cast<double>(i1 - i0);
    for (std::size_t k = i0; k < i1; ++k) {
        const double t = traj.times[k];
        const double ctr = traj.states[k].center();
        st += t;
        sc += ctr;
        stt += t * t;
        stc += t * ctr;
        hmin = std::min(hmin, traj.states[k].h());
        hmax = std::max(hmax, traj.states[k].h());
    }
    const double denom = n * stt - st * st;
    const double slope = (denom != 0.0) ? (n * stc - st * sc) / denom : 0.0;
    return {std::abs(slope), slope >= 0 ? 1.0 : -1.0, (hmax - hmin) / 2.0};
}

BehaviorClass label_from_stats(const WindowStats& w, double v_tol, double a_tol)
{
    if (w.drift < v_tol)
        return (w.amp < a_tol) ? BehaviorClass::SP : BehaviorClass::SB;
    if (w.amp >= a_tol)
        return BehaviorClass::TB;
    return w.drift_sign > 0 ? BehaviorClass::TPplus : BehaviorClass::TPminus;
}

// TP velocity scale used for the drift tolerance: r^(1) sqrt(|tau_d - tau|)
// (Newton-refined below the pitchfork), floored for tau near tau_d.
double tp_velocity_scale(const ModelParams& p, const DerivedCoefficients& c)
{
    double scale = 0.0;
    if (c.g3 > c.g3_tilde) {
        const BifurcationPoints b = bifurcation_points(p, c);
        const double r1c = std::sqrt(std::sqrt(2.0) / (c.g3 - c.g3_tilde));
        scale = r1c * std::sqrt(std::abs(b.tau_d - p.tau));
        if (p.tau < b.tau_d) {
            if (auto tp = tp_newton(p, c, c.h0, scale))
                scale = std::abs(tp->r_star);
        }
    }
    return std::max(scale, 0.02);
}

bool same_behavior(BehaviorClass a, BehaviorClass b)
{
    return a == b;
}

} // namespace

BehaviorClass classify_homogeneous(const Trajectory& traj, const ModelParams& p,
                                   const DerivedCoefficients& c, const ClassifyConfig& cfg)
{
    const double t0 = cfg.transient_skip;
    const double t1 = cfg.transient_skip + cfg.window;
    if (traj.times.empty() || traj.times.back() < t1)
        return BehaviorClass::Unresolved;

    auto lower = std::lower_bound(traj.times.begin(), traj.times.end(), t0);
    auto upper = std::upper_bound(traj.times.begin(), traj.times.end(), t1);
    const std::size_t i0 = static_cast<std::size_t>(lower - traj.times.begin());
    const std::size_t i1 = static_cast<std::size_t>(upper - traj.times.begin());
    if (i1 - i0 < 8)
        return BehaviorClass::Unresolved;

    const double v_tol = cfg.v_tol_factor * tp_velocity_scale(p, c);
    const double a_tol = cfg.a_tol_factor * c.h0;

    const WindowStats full = window_stats(traj, i0, i1);
    const std::size_t mid = i0 + (i1 - i0) / 2;
    const BehaviorClass first = label_from_stats(window_stats(traj, i0, mid), v_tol, a_tol);
    const BehaviorClass second = label_from_stats(window_stats(traj, mid, i1), v_tol, a_tol);
    if (!same_behavior(first, second))
        return BehaviorClass::Unresolved;
    return label_from_stats(full, v_tol, a_tol);
}

// ---------------------------------------------------------------------------
// Scattering classifier
// ---------------------------------------------------------------------------

ScatterOutcome classify_scattering(const Trajectory& traj, const Heterogeneity& het,
                                   const ModelParams& p, const DerivedCoefficients& c)
{
    const auto support = het_support(het);
    if (!support)
        throw Error("invalid-argument", "classify_scattering needs a localized heterogeneity");
    const double e_left = support->first;
    const double e_right = support->second;

    if (traj.states.empty())
        return {ScatterLabel::Unresolved, 0.0};

    const InterfaceState sf = traj.states.back();

    if (traj.termination == Termination::Decomposed) {
        const FrontVelocities fvL = front_velocities(FrontSide::Left, p, c);
        const FrontVelocities fvR = front_velocities(FrontSide::Right, p, c);
        const bool vel_ok =
            std::abs(sf.r2 - fvR.r_plus) <= 0.1 * std::abs(fvR.r_plus) &&
            std::abs(sf.r1 - fvL.r_minus) <= 0.1 * std::abs(fvL.r_minus);
        if (!vel_ok)
            return {ScatterLabel::Unresolved, 0.0};

        double turning = -1e300;
        for (const auto& s : traj.states)
            turning = std::max(turning, s.l1);
        const double margin = 0.5 * std::sqrt(p.D);
        const ScatterLabel label =
            (turning <= e_left + margin) ? ScatterLabel::DEC1 : ScatterLabel::DEC2;
        return {label, turning};
    }

    // Settled traveling pulse?
    StationaryPulse tp{c.h0, 0.0, StationaryPulse::Kind::SP};
    if (auto refined = tp_newton(p, c, c.h0, 0.3))
        tp = *refined;
    const double r_star = std::abs(tp.r_star);
    if (r_star < 1e-12)
        return {ScatterLabel::Unresolved, 0.0};

    const bool h_ok = std::abs(sf.h() - tp.h_star) <= 0.1 * tp.h_star;
    const bool tp_plus = h_ok && std::abs(sf.r2 - r_star) <= 0.1 * r_star &&
                         std::abs(sf.r1 - r_star) <= 0.1 * r_star;
    const bool tp_minus = h_ok && std::abs(sf.r2 + r_star) <= 0.1 * r_star &&
                          std::abs(sf.r1 + r_star) <= 0.1 * r_star;
    if (tp_plus && sf.center() > e_right)
        return {ScatterLabel::PEN, 0.0};
    if (tp_minus && sf.center() < e_left)
        return {ScatterLabel::REB, 0.0};
    return {ScatterLabel::Unresolved, 0.0};
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

ScatterOutcome run_scatter_cell(double d0, double eps0, const ModelParams& p,
                                const DerivedCoefficients& c, const SweepConfig& cfg,
                                double t_end_override)
{
    const SharpBump bump{eps0, d0, cfg.xc};
    const Heterogeneity het{bump};
    const ResponseProfile resp = response_analytic(het, p);

    // Start 30 sqrt(D) left of the bump's left edge (a center-relative offset
    // would land inside wide bumps).
    const double sD = std::sqrt(p.D);
    const InterfaceState s0 = incoming_tp_state(p, c, cfg.xc, d0 / 2.0 + 30.0 * sD);

    IntegratorConfig integ = cfg.integ;
    if (t_end_override > 0)
        integ.t_end = t_end_override;
    integ.x_ref = cfg.xc;
    integ.stop_radius = d0 / 2.0 + 35.0 * sD;

    const Trajectory traj =
        integrate(OdeVariant::truncated(), s0, p, c, resp, integ, het_edges(het));
    return classify_scattering(traj, het, p, c);
}

PhaseBoundary bisect_boundary(double d0, double eps_lo, double eps_hi, const ModelParams& p,
                              const DerivedCoefficients& c, const SweepConfig& cfg)
{
    ScatterLabel lab_lo = run_scatter_cell(d0, eps_lo, p, c, cfg, cfg.bisect_t_end).label;
    ScatterLabel lab_hi = run_scatter_cell(d0, eps_hi, p, c, cfg, cfg.bisect_t_end).label;
    if (lab_lo == lab_hi)
        throw Error("invalid-argument", "bisect_boundary bracket has equal labels");

    while (eps_hi - eps_lo > cfg.bisect_tol) {
        const double mid = 0.5 * (eps_lo + eps_hi);
        const ScatterLabel lab = run_scatter_cell(d0, mid, p, c, cfg, cfg.bisect_t_end).label;
        if (lab == lab_lo) {
            eps_lo = mid;
        } else {
            eps_hi = mid;
            lab_hi = lab;
        }
    }
    PhaseBoundary b;
    b.d0 = d0;
    b.eps_star = 0.5 * (eps_lo + eps_hi);
    b.kind = std::string(scatter_name(lab_lo)) + "-" + scatter_name(lab_hi);
    return b;
}

PhaseDiagram sweep_phase_diagram(const std::vector<double>& d0s, const std::vector<double>& eps0s,
                                 const ModelParams& p, const DerivedCoefficients& c,
                                 const SweepConfig& cfg)
{
    PhaseDiagram pd;
    pd.d0 = d0s;
    pd.eps0 = eps0s;
    pd.labels.assign(d0s.size() * eps0s.size(), ScatterLabel::Unresolved);

    const long total = static_cast<long>(pd.labels.size());
    if (cfg.jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
#endif
        for (long k = 0; k < total; ++k) {
            const std::size_t i = static_cast<std::size_t>(k) / eps0s.size();
            const std::size_t j = static_cast<std::size_t>(k) % eps0s.size();
            pd.labels[k] = run_scatter_cell(d0s[i], eps0s[j], p, c, cfg).label;
        }
    } else {
        // Serial reference path; must agree with the parallel one exactly.
        for (long k = 0; k < total; ++k) {
            const std::size_t i = static_cast<std::size_t>(k) / eps0s.size();
            const std::size_t j = static_cast<std::size_t>(k) % eps0s.size();
            pd.labels[k] = run_scatter_cell(d0s[i], eps0s[j], p, c, cfg).label;
        }
    }

    if (cfg.refine) {
        for (std::size_t i = 0; i < d0s.size(); ++i) {
            for (std::size_t j = 0; j + 1 < eps0s.size(); ++j) {
                const ScatterLabel a = pd.at(i, j);
                const ScatterLabel b = pd.at(i, j + 1);
                if (a == b || a == ScatterLabel::Unresolved || b == ScatterLabel::Unresolved)
                    continue;
                pd.boundaries.push_back(
                    bisect_boundary(d0s[i], eps0s[j], eps0s[j + 1], p, c, cfg));
            }
        }
    }
    return pd;
}

// ---------------------------------------------------------------------------
// Residence time and trapping
// ---------------------------------------------------------------------------

namespace {

// max(sL - l1, l2 - sR): negative iff both interfaces are inside [sL, sR].
double outside_measure(const InterfaceState& s, double sL, double sR)
{
    return std::max(sL - s.l1, s.l2 - sR);
}

double interp_crossing(double t0, double m0, double t1, double m1)
{
    return t0 + (0.0 - m0) / (m1 - m0) * (t1 - t0);
}

} // namespace

double residence_time(const Trajectory& traj, const Heterogeneity& het)
{
    const auto support = het_support(het);
    if (!support)
        throw Error("invalid-argument", "residence_time needs a localized heterogeneity");
    const double sL = support->first, sR = support->second;

    std::size_t k = 0;
    const std::size_t n = traj.states.size();
    double t_entry = 0;
    bool entered = false;
    for (; k + 1 < n; ++k) {
        const double m0 = outside_measure(traj.states[k], sL, sR);
        const double m1 = outside_measure(traj.states[k + 1], sL, sR);
        if (m1 <= 0.0) {
            t_entry = (m0 > 0.0) ? interp_crossing(traj.times[k], m0, traj.times[k + 1], m1)
                                 : traj.times[k];
            entered = true;
            ++k;
            break;
        }
    }
    if (!entered)
        throw Error("no-entry", "the pulse never fully entered the heterogeneity support");

    for (; k + 1 < n; ++k) {
        const double m0 = outside_measure(traj.states[k], sL, sR);
        const double m1 = outside_measure(traj.states[k + 1], sL, sR);
        if (m0 <= 0.0 && m1 > 0.0)
            return interp_crossing(traj.times[k], m0, traj.times[k + 1], m1) - t_entry;
    }
    return traj.times.back() - t_entry;  // never exited within the horizon
}

TrapResult trap_check(const Trajectory& traj, const SquareWell& well)
{
    const double L = well.xc - well.d0 / 2.0 - well.d1;
    const double R = well.xc + well.d0 / 2.0 + well.d1;

    bool entered = false;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const InterfaceState& s = traj.states[k];
        if (!entered) {
            entered = (s.l1 >= L && s.l2 <= R);
            continue;
        }
        if (s.l2 > R)
            return TrapResult::EscapedRight;
        if (s.l1 < L)
            return TrapResult::EscapedLeft;
    }
    if (!entered)
        return (traj.states.back().center() > well.xc) ? TrapResult::EscapedRight
                                                       : TrapResult::EscapedLeft;
    return TrapResult::Trapped;
}

} // namespace pulsedyn
