#include "pulsedyn/pde.hpp"

#include <algorithm>
#include <cmath>

#include "pulsedyn/error.hpp"
#include "pulsedyn/tridiag.hpp"

namespace pulsedyn {

PdeState make_pde_initial(const ModelParams& p, const Heterogeneity& het, const PdeConfig& cfg,
                          double l1, double l2)
{
    PdeState s;
    s.x_lo = cfg.x_lo;
    s.dx = cfg.dx;
    s.t = 0.0;

    ResponseProfile resp = ResponseProfile::constant(p.delta0);
    try {
        resp = response_analytic(het, p);
    } catch (const Error& e) {
        if (e.kind() != "use-response-numeric")
            throw;
        const int nn = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
        resp = response_numeric(het, p, cfg.x_lo, cfg.x_hi, nn);
    }

    const int n = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
    s.u.resize(n);
    s.v.resize(n);
    const double w = 2.0 * std::sqrt(2.0) * p.epsilon;  // kink width scale
    for (int i = 0; i < n; ++i) {
        const double x = s.x(i);
        s.u[i] = 0.5 * std::tanh((x - l1) / w) - 0.5 * std::tanh((x - l2) / w) - 0.5;
        s.v[i] = resp(x) - 0.5 + box_response(x, l1, l2, p.D);
    }
    return s;
}

PdeStepper::PdeStepper(const ModelParams& p, const Heterogeneity& het, const PdeConfig& cfg)
    : p_(p), cfg_(cfg)
{
    const int n = static_cast<int>(std::round((cfg.x_hi - cfg.x_lo) / cfg.dx)) + 1;
    delta_.resize(n);
    for (int i = 0; i < n; ++i)
        delta_[i] = het_delta(het, p, cfg.x_lo + i * cfg.dx);
    alpha_u_ = (p.epsilon / p.tau) * cfg.dt / (2.0 * cfg.dx * cfg.dx);
    alpha_v_ = p.D * cfg.dt / (2.0 * cfg.dx * cfg.dx);
}

void PdeStepper::step(PdeState& s) const
{
    const std::size_t n = s.u.size();
    rhs_.resize(n);
    const double react_scale = 1.0 / (p_.tau * p_.epsilon);

    // u update (old v in the reaction).
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i == 0) ? n - 1 : i - 1;
        const std::size_t ip = (i == n - 1) ? 0 : i + 1;
        const double lap = s.u[im] - 2.0 * s.u[i] + s.u[ip];
        rhs_[i] = s.u[i] + alpha_u_ * lap + cfg_.dt * react_scale * reaction_f(s.u[i], s.v[i]);
    }
    std::vector<double> u_new;
    cyclic_tridiag_solve(-alpha_u_, 1.0 + 2.0 * alpha_u_, -alpha_u_, rhs_, u_new, work1_, work2_,
                         work3_);

    // v update (old u, matching the explicit-reaction splitting).
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i == 0) ? n - 1 : i - 1;
        const std::size_t ip = (i == n - 1) ? 0 : i + 1;
        const double lap = s.v[im] - 2.0 * s.v[i] + s.v[ip];
        rhs_[i] = s.v[i] + alpha_v_ * lap + cfg_.dt * reaction_g(s.u[i], s.v[i], delta_[i]);
    }
    std::vector<double> v_new;
    cyclic_tridiag_solve(-alpha_v_, 1.0 + 2.0 * alpha_v_, -alpha_v_, rhs_, v_new, work1_, work2_,
                         work3_);

    s.u = std::move(u_new);
    s.v = std::move(v_new);
    s.t += cfg_.dt;

    for (const double u : s.u)
        if (!(std::abs(u) < 1.5))
            throw Error("blowup", "|u| exceeded 1.5 at t = " + std::to_string(s.t));
}

std::optional<std::pair<double, double>> extract_interfaces(const PdeState& s)
{
    std::vector<double> crossings;
    const std::size_t n = s.u.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = s.u[i], b = s.u[i + 1];
        if (a == 0.0) {
            crossings.push_back(s.x(i));
        } else if (a * b < 0.0) {
            const double w = a / (a - b);
            crossings.push_back(s.x(i) + w * s.dx);
        }
    }
    if (crossings.size() != 2)
        return std::nullopt;
    return std::make_pair(crossings[0], crossings[1]);
}

Trajectory run_pde(PdeState s0, const ModelParams& p, const Heterogeneity& het,
                   const PdeConfig& cfg, const std::function<void(const PdeState&)>& on_snapshot)
{
    const PdeStepper stepper(p, het, cfg);

    Trajectory traj;
    auto record = [&](const PdeState& s) -> bool {
        const auto li = extract_interfaces(s);
        if (!li) {
            traj.events.push_back({s.t, "interface-count", 0.0});
            return false;
        }
        InterfaceState st;
        st.l1 = li->first;
        st.l2 = li->second;
        if (!traj.states.empty()) {
            const double dt = s.t - traj.times.back();
            st.r1 = (st.l1 - traj.states.back().l1) / dt;
            st.r2 = (st.l2 - traj.states.back().l2) / dt;
        }
        traj.times.push_back(s.t);
        traj.states.push_back(st);
        return true;
    };

    record(s0);

    std::vector<double> snapshots = cfg.snapshot_times;
    std::sort(snapshots.begin(), snapshots.end());
    std::size_t next_snap = 0;

    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    PdeState s = std::move(s0);
    for (long k = 1; k <= n_steps; ++k) {
        stepper.step(s);
        if (on_snapshot && next_snap < snapshots.size() && s.t >= snapshots[next_snap] - 1e-12) {
            on_snapshot(s);
            ++next_snap;
        }
        if (k % cfg.record_stride == 0 || k == n_steps) {
            if (!record(s))
                break;
        }
    }
    // First recorded state has no velocity estimate; copy from the second.
    if (traj.states.size() >= 2) {
        traj.states.front().r1 = traj.states[1].r1;
        traj.states.front().r2 = traj.states[1].r2;
    }
    return traj;
}

} // namespace pulsedyn
