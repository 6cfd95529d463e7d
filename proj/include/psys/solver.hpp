#pragma once

// Method-of-lines integration of  u_t = -v_x,  v_t = (p(u))_x  on the circle:
// pseudo-spectral derivatives, classical RK4, exponential filter after each
// step. Runs terminate on gradient blow-up, loss of resolution, or t_max;
// data that is not strictly hyperbolic is refused up front.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/pressure.hpp"

namespace psys {

struct SolverConfig {
    double cfl_safety = 0.4;
    double t_max = 10.0;
    double grad_blowup_factor = 50.0;
    double tail_ratio_max = 1e-4;
    double hyperbolicity_eps = 1e-3;
    std::size_t snapshot_stride = 1;
    /// > 0 switches off the adaptive CFL step (convergence studies).
    double fixed_dt = 0.0;
    bool filter = true;
    /// Integrate toward t0 - (t_max - t0) via (t, v) -> (-t, -v).
    bool backward = false;
};

/// Throws ConfigError on invalid settings; returns non-fatal warnings.
inline std::vector<std::string> validate(const SolverConfig& c, double t0)
{
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0))
        throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!positive(c.grad_blowup_factor))
        throw ConfigError("grad_blowup_factor must be positive");
    if (!positive(c.tail_ratio_max))
        throw ConfigError("tail_ratio_max must be positive");
    if (!positive(c.hyperbolicity_eps))
        throw ConfigError("hyperbolicity_eps must be positive");
    if (!(std::isfinite(c.t_max) && c.t_max > t0))
        throw ConfigError("t_max must exceed t0");
    if (c.snapshot_stride == 0)
        throw ConfigError("snapshot_stride must be >= 1");
    if (!(std::isfinite(c.fixed_dt) && c.fixed_dt >= 0.0))
        throw ConfigError("fixed_dt must be >= 0");

    std::vector<std::string> warnings;
    if (c.snapshot_stride > 5)
        warnings.push_back("snapshot_stride > 5: snapshot spacing exceeds 5 dt, characteristic "
                           "tracing accuracy degrades");
    return warnings;
}

struct SeriesRecord {
    double t;
    double max_u;
    double min_u;
    double max_abs_ux;
    double max_abs_vx;
    double tail_ratio;
};

struct Snapshot {
    double t;
    StateField state;
};

enum class RunStatus { completed, blow_up_detected, admission_refused, resolution_lost };

inline const char* to_string(RunStatus s)
{
    switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blow_up_detected: return "blow_up_detected";
    case RunStatus::admission_refused: return "admission_refused";
    case RunStatus::resolution_lost: return "resolution_lost";
    }
    return "?";
}

/// Time-ordered snapshots plus termination status. Snapshot times are
/// strictly monotone: increasing for forward runs, decreasing for backward.
class Trajectory {
public:
    explicit Trajectory(std::vector<Snapshot> snapshots, RunStatus status = RunStatus::completed,
                        std::optional<double> t_event = std::nullopt, std::size_t steps = 0,
                        std::vector<SeriesRecord> series = {})
        : snapshots_(std::move(snapshots)), status_(status), t_event_(t_event), steps_(steps),
          series_(std::move(series))
    {
        if (snapshots_.empty())
            throw DomainError("Trajectory: needs at least one snapshot");
        if (snapshots_.size() >= 2) {
            const bool up = snapshots_[1].t > snapshots_[0].t;
            for (std::size_t i = 1; i < snapshots_.size(); ++i) {
                const double d = snapshots_[i].t - snapshots_[i - 1].t;
                if (up ? !(d > 0.0) : !(d < 0.0))
                    throw DomainError("Trajectory: snapshot times must be strictly monotone");
                if (!(snapshots_[i].state.grid() == snapshots_[0].state.grid()))
                    throw DomainError("Trajectory: all snapshots must share one grid");
            }
        }
    }

    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    RunStatus status() const { return status_; }
    /// Time of blow-up detection or resolution loss, when applicable.
    std::optional<double> t_event() const { return t_event_; }
    std::size_t steps() const { return steps_; }
    const std::vector<SeriesRecord>& series() const { return series_; }
    double t0() const { return snapshots_.front().t; }
    double t_end() const { return snapshots_.back().t; }
    bool forward() const { return snapshots_.size() < 2 || snapshots_[1].t > snapshots_[0].t; }
    const PeriodicGrid& grid() const { return snapshots_.front().state.grid(); }

private:
    std::vector<Snapshot> snapshots_;
    RunStatus status_;
    std::optional<double> t_event_;
    std::size_t steps_;
    std::vector<SeriesRecord> series_;
};

// ---------------------------------------------------------------------------

struct Rates {
    std::vector<double> du_dt;
    std::vector<double> dv_dt;
};

namespace detail {

inline Rates rhs_arrays(const PressureLaw& law, const PeriodicGrid& grid,
                        std::span<const double> u, std::span<const double> v)
{
    std::vector<double> pu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        pu[j] = eval_p(law, u[j]);
    auto du = spectral_derivative(grid, v);
    for (double& x : du)
        x = -x;
    return {std::move(du), spectral_derivative(grid, pu)};
}

} // namespace detail

/// (u_t, v_t) = (-v_x, (p(u))_x) with spectral x-derivatives.
inline Rates rhs(const PressureLaw& law, const StateField& state)
{
    return detail::rhs_arrays(law, state.grid(), state.u(), state.v());
}

/// dt = safety * dx / max_j sqrt(-p'(u_j)). Throws DegenerateSpeed (carrying
/// safety*dx as the fallback) when every speed is below 1e-12.
inline double cfl_dt(const PressureLaw& law, const StateField& state, double cfl_safety)
{
    double speed = 0.0;
    for (double u : state.u()) {
        const double m = -eval_dp(law, u);
        if (m > 0.0)
            speed = std::max(speed, std::sqrt(m));
    }
    const double dx = state.grid().dx();
    if (speed < 1e-12)
        throw DegenerateSpeed("cfl_dt: maximum characteristic speed vanishes", cfl_safety * dx);
    return cfl_safety * dx / speed;
}

/// One classical RK4 step followed by the exponential filter. Negative dt
/// steps backward in time.
inline StateField step_rk4(const PressureLaw& law, const StateField& state, double dt,
                           bool filter = true)
{
    if (!(std::isfinite(dt) && dt != 0.0))
        throw DomainError("step_rk4: dt must be finite and nonzero");
    const auto& grid = state.grid();
    const std::size_t n = grid.n();
    const auto u0 = state.u();
    const auto v0 = state.v();

    std::vector<double> ut(n), vt(n);
    auto stage = [&](const Rates& k, double h) {
        for (std::size_t j = 0; j < n; ++j) {
            ut[j] = u0[j] + h * k.du_dt[j];
            vt[j] = v0[j] + h * k.dv_dt[j];
        }
        return detail::rhs_arrays(law, grid, ut, vt);
    };
    const Rates k1 = detail::rhs_arrays(law, grid, u0, v0);
    const Rates k2 = stage(k1, 0.5 * dt);
    const Rates k3 = stage(k2, 0.5 * dt);
    const Rates k4 = stage(k3, dt);

    std::vector<double> u1(n), v1(n);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n; ++j) {
        u1[j] = u0[j] + w * (k1.du_dt[j] + 2.0 * k2.du_dt[j] + 2.0 * k3.du_dt[j] + k4.du_dt[j]);
        v1[j] = v0[j] + w * (k1.dv_dt[j] + 2.0 * k2.dv_dt[j] + 2.0 * k3.dv_dt[j] + k4.dv_dt[j]);
    }
    if (filter) {
        u1 = exponential_filter(grid, u1);
        v1 = exponential_filter(grid, v1);
    }
    detail::require_finite(u1, "step_rk4 u");
    detail::require_finite(v1, "step_rk4 v");
    return {grid, std::move(u1), std::move(v1)};
}

enum class MonitorStatus { quiet, blow_up, resolution_lost };

struct MonitorReading {
    MonitorStatus status;
    double max_abs_ux;
    double max_abs_vx;
    double tail_ratio;
};

/// Blow-up when max|u_x| > grad_blowup_factor * initial_scale; resolution
/// loss when the spectral tail ratio of u or v exceeds tail_ratio_max.
inline MonitorReading blowup_monitor(const StateField& state, double initial_scale,
                                     const SolverConfig& config)
{
    if (!(initial_scale > 0.0))
        throw DomainError("blowup_monitor: initial_scale must be positive");
    const auto& grid = state.grid();
    const double ux = max_abs(spectral_derivative(grid, state.u()));
    const double vx = max_abs(spectral_derivative(grid, state.v()));
    const double tail =
        std::max(spectral_tail_ratio(grid, state.u()), spectral_tail_ratio(grid, state.v()));

    MonitorStatus status = MonitorStatus::quiet;
    if (ux > config.grad_blowup_factor * initial_scale)
        status = MonitorStatus::blow_up;
    else if (tail > config.tail_ratio_max)
        status = MonitorStatus::resolution_lost;
    return {status, ux, vx, tail};
}

/// max(1, max|u_x|) of a state: the reference scale for blowup_monitor.
inline double initial_gradient_scale(const StateField& state)
{
    return std::max(1.0, max_abs(spectral_derivative(state.grid(), state.u())));
}

namespace detail {

inline StateField flip_v(const StateField& s)
{
    std::vector<double> v(s.v().begin(), s.v().end());
    for (double& x : v)
        x = -x;
    return {s.grid(), std::vector<double>(s.u().begin(), s.u().end()), std::move(v)};
}

} // namespace detail

/// Integrate from state0 at t0. Never throws for numerical failure modes:
/// those become Trajectory statuses.
inline Trajectory run(const PressureLaw& law, const StateField& state0, double t0,
                      const SolverConfig& config)
{
    validate(config, t0);

    auto series_at = [&](double t, const StateField& s, const MonitorReading& m) {
        const auto u = s.u();
        return SeriesRecord{t, *std::max_element(u.begin(), u.end()),
                            *std::min_element(u.begin(), u.end()), m.max_abs_ux, m.max_abs_vx,
                            m.tail_ratio};
    };

    if (hyperbolicity_margin(state0) > -config.hyperbolicity_eps) {
        return Trajectory({{t0, state0}}, RunStatus::admission_refused);
    }

    const double sign = config.backward ? -1.0 : 1.0;
    const double duration = config.t_max - t0;
    // Backward runs integrate (u, -v) forward in s = t0 - t.
    StateField work = config.backward ? detail::flip_v(state0) : state0;
    auto physical = [&](const StateField& s) {
        return config.backward ? detail::flip_v(s) : s;
    };

    const double scale = initial_gradient_scale(state0);
    std::vector<Snapshot> snaps{{t0, state0}};
    std::vector<SeriesRecord> series{series_at(t0, state0, blowup_monitor(state0, scale, config))};

    double s = 0.0;
    std::size_t steps = 0;
    RunStatus status = RunStatus::completed;
    std::optional<double> t_event;

    while (s < duration) {
        double dt = config.fixed_dt;
        if (dt <= 0.0) {
            try {
                dt = cfl_dt(law, work, config.cfl_safety);
            } catch (const DegenerateSpeed& e) {
                dt = e.fallback_dt;
            }
        }
        // absorb a sliver of remaining time into this step
        const bool last = s + dt >= duration * (1.0 - 1e-12);
        if (last)
            dt = duration - s;

        const double t_next = t0 + sign * (last ? duration : s + dt);
        try {
            work = step_rk4(law, work, dt, config.filter);
        } catch (const NonFiniteState&) {
            status = RunStatus::resolution_lost;
            t_event = t_next;
            break;
        }
        s = last ? duration : s + dt;
        ++steps;

        const StateField phys = physical(work);
        const MonitorReading m = blowup_monitor(phys, scale, config);
        series.push_back(series_at(t_next, phys, m));

        if (hyperbolicity_margin(phys) > -config.hyperbolicity_eps) {
            status = RunStatus::resolution_lost;
        } else if (m.status == MonitorStatus::blow_up) {
            status = RunStatus::blow_up_detected;
        } else if (m.status == MonitorStatus::resolution_lost) {
            status = RunStatus::resolution_lost;
        }
        if (status != RunStatus::completed) {
            t_event = t_next;
            snaps.push_back({t_next, phys});
            break;
        }
        if (steps % config.snapshot_stride == 0 || last)
            snaps.push_back({t_next, phys});
    }
    return Trajectory(std::move(snaps), status, t_event, steps, std::move(series));
}

} // namespace psys
