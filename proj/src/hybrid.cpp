#include "pulsedyn/hybrid.hpp"

#include <algorithm>
#include <cmath>

#include "pulsedyn/error.hpp"
#include "pulsedyn/tridiag.hpp"

namespace pulsedyn {

double u_indicator(double x, double l2, double l1)
{
    // +1/2 on (l1, l2], -1/2 elsewhere.
    return (x > l1 && x <= l2) ? 0.5 : -0.5;
}

double FieldState::interp(double xq) const
{
    const double u = (xq - x_lo) / dx;
    if (u <= 0.0)
        return v.front();
    const double last = static_cast<double>(v.size() - 1);
    if (u >= last)
        return v.back();
    const std::size_t i = static_cast<std::size_t>(u);
    const double w = u - static_cast<double>(i);
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

FieldState make_hybrid_initial(const ModelParams& p, const Heterogeneity& het,
                               const HybridConfig& cfg, double l1, double l2)
{
    FieldState s;
    s.x_lo = cfg.x_lo;
    s.dx = cfg.dx;
    s.l1 = l1;
    s.l2 = l2;
    s.t = 0.0;

    ResponseProfile resp = ResponseProfile::constant(p.delta0);
    try {
        resp = response_analytic(het, p);
    } catch (const Error& e) {
        if (e.kind() != "use-response-numeric")
            throw;
        const int n = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
        resp = response_numeric(het, p, cfg.x_lo, cfg.x_hi, n);
    }

    const int n = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
    s.v.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = s.x(i);
        s.v[i] = resp(x) - 0.5 + box_response(x, l1, l2, p.D);
    }
    return s;
}

HybridStepper::HybridStepper(const ModelParams& p, const Heterogeneity& het,
                             const HybridConfig& cfg)
    : p_(p), cfg_(cfg)
{
    const int n = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
    delta_.resize(n);
    for (int i = 0; i < n; ++i)
        delta_[i] = het_delta(het, p, cfg.x_lo + i * cfg.dx);
    alpha_ = p.D * cfg.dt / (2.0 * cfg.dx * cfg.dx);
}

void HybridStepper::solve_diffusion(std::vector<double>& v) const
{
    if (cfg_.boundary == HybridConfig::Boundary::Periodic) {
        cyclic_tridiag_solve(-alpha_, 1.0 + 2.0 * alpha_, -alpha_, rhs_, v, work1_, work2_, work3_);
    } else {
        // No-flux: ghost-node reflection doubles the off-diagonal in the
        // boundary rows.
        tridiag_solve(-alpha_, 1.0 + 2.0 * alpha_, -alpha_, 1.0 + 2.0 * alpha_, -2.0 * alpha_,
                      1.0 + 2.0 * alpha_, -2.0 * alpha_, rhs_, v, work1_);
    }
}

void HybridStepper::step(FieldState& s) const
{
    const std::size_t n = s.v.size();
    rhs_.resize(n);

    const bool periodic = cfg_.boundary == HybridConfig::Boundary::Periodic;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i == 0) ? (periodic ? n - 1 : 1) : i - 1;
        const std::size_t ip = (i == n - 1) ? (periodic ? 0 : n - 2) : i + 1;
        const double lap = s.v[im] - 2.0 * s.v[i] + s.v[ip];
        const double u = u_indicator(s.x(i), s.l2, s.l1);
        rhs_[i] = s.v[i] + alpha_ * lap + cfg_.dt * (u - s.v[i] + delta_[i]);
    }
    solve_diffusion(s.v);

    // Interfaces from the updated field (operator splitting, field first).
    const double inv = 1.0 / (std::sqrt(2.0) * p_.tau);
    const double v2 = s.interp(s.l2);
    const double v1 = s.interp(s.l1);
    s.l2 += cfg_.dt * (-v2 * inv);
    s.l1 += cfg_.dt * (v1 * inv);
    s.t += cfg_.dt;

    if (s.l1 <= cfg_.x_lo || s.l1 >= cfg_.x_hi)
        throw Error("domain-exit", "left interface left the domain");
    if (s.l2 <= cfg_.x_lo || s.l2 >= cfg_.x_hi)
        throw Error("domain-exit", "right interface left the domain");
    if (s.l2 - s.l1 < cfg_.dx)
        throw Error("interfaces-merged", "pulse width fell below one grid cell");
}

Trajectory run_hybrid(FieldState s0, const ModelParams& p, const Heterogeneity& het,
                      const HybridConfig& cfg,
                      const std::function<void(const FieldState&)>& on_snapshot)
{
    const HybridStepper stepper(p, het, cfg);
    const std::vector<double> edges = het_edges(het);
    const double inv = 1.0 / (std::sqrt(2.0) * p.tau);

    auto as_state = [&](const FieldState& f) {
        InterfaceState s;
        s.l2 = f.l2;
        s.l1 = f.l1;
        s.r2 = -f.interp(f.l2) * inv;
        s.r1 = f.interp(f.l1) * inv;
        return s;
    };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(as_state(s0));

    std::vector<double> snapshots = cfg.snapshot_times;
    std::sort(snapshots.begin(), snapshots.end());
    std::size_t next_snap = 0;
    if (on_snapshot && !snapshots.empty() && snapshots[0] <= 0.0) {
        on_snapshot(s0);
        ++next_snap;
    }

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    FieldState s = std::move(s0);
    InterfaceState prev = traj.states.back();

    for (long k = 1; k <= n_steps; ++k) {
        try {
            stepper.step(s);
        } catch (const Error& e) {
            if (e.kind() == "domain-exit") {
                traj.events.push_back({s.t, "domain-exit", s.l2});
                traj.termination = Termination::DomainExit;
                break;
            }
            if (e.kind() == "interfaces-merged") {
                traj.events.push_back({s.t, "interfaces-merged", 0.5 * (s.l1 + s.l2)});
                traj.termination = Termination::InterfacesMerged;
                break;
            }
            throw;
        }
        const InterfaceState cur = as_state(s);
        for (const double e : edges) {
            if ((prev.l1 - e) * (cur.l1 - e) < 0.0)
                traj.events.push_back({s.t, "l1-cross", e});
            if ((prev.l2 - e) * (cur.l2 - e) < 0.0)
                traj.events.push_back({s.t, "l2-cross", e});
        }
        prev = cur;

        if (on_snapshot && next_snap < snapshots.size() && s.t >= snapshots[next_snap] - 1e-12) {
            on_snapshot(s);
            ++next_snap;
        }
        if (k % cfg.record_stride == 0 || k == n_steps) {
            traj.times.push_back(s.t);
            traj.states.push_back(cur);
            double vmax = 0.0;
            for (const double v : s.v)
                vmax = std::max(vmax, std::abs(v));
            if (!(vmax < 2.0))
                throw Error("blowup", "field magnitude exceeded bound 2");
        }
    }
    return traj;
}

} // namespace pulsedyn
