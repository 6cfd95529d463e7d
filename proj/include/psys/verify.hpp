#pragma once

// Reproducible scenarios that combine solver, characteristics and energy
// diagnostics into pass/fail evidence. Each report carries the thresholds it
// was judged against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "psys/characteristics.hpp"
#include "psys/energy.hpp"
#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/initial_data.hpp"
#include "psys/pressure.hpp"
#include "psys/riemann.hpp"
#include "psys/solver.hpp"

namespace psys {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct ScenarioReport {
    std::string scenario_id;
    PressureLaw law;
    std::int64_t seed = 0;
    std::map<std::string, double> metrics;
    std::map<std::string, double> thresholds;
    Verdict verdict = Verdict::inconclusive;
    std::string reason;
    std::vector<std::string> artifacts;

    ScenarioReport() = default;
    ScenarioReport(std::string id, const PressureLaw& l, std::int64_t s = 0)
        : scenario_id(std::move(id)), law(l), seed(s)
    {
    }
};

// ---------------------------------------------------------------------------
// Constant hyperbolic data must stay constant.

inline ScenarioReport scenario_constant(const PressureLaw& law, double u0, double v0, double t_max,
                                        std::size_t n = 256)
{
    ScenarioReport r{"constant", law};
    r.thresholds["max_deviation"] = 1e-10;
    r.metrics["u0"] = u0;
    r.metrics["v0"] = v0;
    r.metrics["t_max"] = t_max;
    if (!(u0 < 0.0)) {
        r.verdict = Verdict::fail;
        r.reason = "u0 must be negative";
        return r;
    }
    const PeriodicGrid grid(n);
    const auto state0 = StateField::constant(grid, u0, v0);
    SolverConfig cfg;
    cfg.t_max = t_max;
    cfg.snapshot_stride = 1u << 30; // only first and last
    const auto traj = run(law, state0, 0.0, cfg);

    const auto& fin = traj.snapshots().back();
    double dev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        dev = std::max(dev, std::abs(fin.state.u()[j] - u0));
        dev = std::max(dev, std::abs(fin.state.v()[j] - v0));
    }
    r.metrics["max_deviation"] = dev;
    r.metrics["t_final"] = fin.t;
    r.metrics["steps"] = static_cast<double>(traj.steps());
    const bool done = traj.status() == RunStatus::completed && fin.t == t_max;
    r.verdict = done && dev < r.thresholds["max_deviation"] ? Verdict::pass : Verdict::fail;
    if (!done)
        r.reason = std::string("run ended with status ") + to_string(traj.status());
    return r;
}

// ---------------------------------------------------------------------------
// Simple-wave blow-up: solver detection vs. Riccati prediction vs. Burgers.

struct SimpleWaveOptions {
    std::size_t n = 1024;
    /// 0 means 2 * t_oracle.
    double t_max = 0.0;
    std::size_t trace_seeds = 256;
    std::size_t pair_check_seeds = 16;
    SolverConfig solver{};
};

struct SimpleWaveOutcome {
    ScenarioReport report;
    std::optional<Trajectory> trajectory;
};

inline SimpleWaveOutcome simple_wave_blowup_run(const PressureLaw& law, const SimpleWaveData& data,
                                                const SimpleWaveOptions& opt = {})
{
    ScenarioReport r{"simple_wave_blowup", law};
    r.thresholds["relative_gap"] = 0.05;
    r.thresholds["invariant_drift"] = 1e-4;
    r.thresholds["drift_gradient_growth"] = 10.0;
    r.thresholds["bb_pair_violations"] = 0.0;
    r.metrics["u_center"] = data.u_center;
    r.metrics["amplitude"] = data.amplitude;
    r.metrics["mode"] = data.mode;
    r.metrics["n"] = static_cast<double>(opt.n);

    if (data.amplitude == 0.0) {
        r.verdict = Verdict::inconclusive;
        r.reason = "zero amplitude: data is constant, no blow-up to compare";
        return {r, std::nullopt};
    }
    const auto t_oracle = simple_wave_burgers_time(law, data);
    if (!t_oracle) {
        r.verdict = Verdict::inconclusive;
        r.reason = "lambda_1 nowhere decreasing: no Burgers crossing";
        return {r, std::nullopt};
    }
    r.metrics["t_oracle"] = *t_oracle;

    const PeriodicGrid grid(opt.n);
    const auto state0 = realize(law, grid, data);
    SolverConfig cfg = opt.solver;
    cfg.t_max = opt.t_max > 0.0 ? opt.t_max : 2.0 * *t_oracle;
    r.metrics["t_max"] = cfg.t_max;
    Trajectory traj = run(law, state0, 0.0, cfg);
    r.metrics["steps"] = static_cast<double>(traj.steps());

    if (traj.status() != RunStatus::blow_up_detected) {
        r.verdict = Verdict::fail;
        r.reason = std::string("expected blow_up_detected, got ") + to_string(traj.status());
        return {r, std::move(traj)};
    }
    const double t_detect = *traj.t_event();
    r.metrics["t_detect"] = t_detect;

    // Time at which max|u_x| first exceeds 10x its initial value.
    const auto& series = traj.series();
    const double ux0 = series.front().max_abs_ux;
    double t_growth = traj.t_end();
    for (const auto& s : series)
        if (s.max_abs_ux > r.thresholds["drift_gradient_growth"] * ux0) {
            t_growth = s.t;
            break;
        }
    r.metrics["t_gradient_10x"] = t_growth;

    const TrajectoryInterpolant field(traj);
    TraceOptions topt;
    topt.t_start = traj.t0();
    double t_pred = std::numeric_limits<double>::infinity();
    double drift1 = 0.0, drift2 = 0.0;
    for (std::size_t i = 0; i < opt.trace_seeds; ++i) {
        const double x0 = static_cast<double>(i) / static_cast<double>(opt.trace_seeds);
        const auto c1 = trace(law, field, x0, Family::first, Direction::forward, topt);
        const double beta0 = c1.samples.front().beta;
        if (auto tp = predict_blowup(law, c1, beta0, Extrapolation::final_slope))
            t_pred = std::min(t_pred, *tp);
        drift1 = std::max(drift1, invariant_drift(c1, t_growth - traj.t0()));
        const auto c2 = trace(law, field, x0, Family::second, Direction::forward, topt);
        drift2 = std::max(drift2, invariant_drift(c2, t_growth - traj.t0()));
    }
    r.metrics["drift_first"] = drift1;
    r.metrics["drift_second"] = drift2;

    const auto pairs = bb_pair_check(law, traj, opt.pair_check_seeds);
    r.metrics["bb_pair_violations"] = static_cast<double>(pairs.violations);

    if (!std::isfinite(t_pred)) {
        r.verdict = Verdict::fail;
        r.reason = "no characteristic predicted a blow-up";
        return {r, std::move(traj)};
    }
    r.metrics["t_predicted"] = t_pred;
    const double gap_detect = std::abs(t_detect - *t_oracle) / *t_oracle;
    const double gap_pred = std::abs(t_pred - *t_oracle) / *t_oracle;
    const double gap_pair = std::abs(t_detect - t_pred) / std::min(t_detect, t_pred);
    r.metrics["relative_gap_detect_oracle"] = gap_detect;
    r.metrics["relative_gap_predicted_oracle"] = gap_pred;
    r.metrics["relative_gap_detect_predicted"] = gap_pair;

    const double tol = r.thresholds["relative_gap"];
    const double dtol = r.thresholds["invariant_drift"];
    std::vector<std::string> failures;
    if (!(gap_detect < tol))
        failures.push_back("t_detect vs oracle");
    if (!(gap_pred < tol))
        failures.push_back("t_predicted vs oracle");
    if (!(gap_pair < tol))
        failures.push_back("t_detect vs t_predicted");
    if (!(drift1 < dtol))
        failures.push_back("r1 drift on first-family curves");
    if (!(drift2 < dtol))
        failures.push_back("r2 drift on second-family curves");
    if (pairs.violations > 0)
        failures.push_back("same-direction (B,B) pair across families");
    r.verdict = failures.empty() ? Verdict::pass : Verdict::fail;
    for (const auto& f : failures)
        r.reason += (r.reason.empty() ? "" : "; ") + f;
    return {r, std::move(traj)};
}

inline ScenarioReport scenario_simple_wave_blowup(const PressureLaw& law, const SimpleWaveData& data,
                                                  const SimpleWaveOptions& opt = {})
{
    return simple_wave_blowup_run(law, data, opt).report;
}

// ---------------------------------------------------------------------------
// Random nonconstant hyperbolic data never survives to t_max.

struct SweepOptions {
    std::size_t n = 512;
    std::uint64_t base_seed = 0;
    int modes = 4;
    double amplitude = 0.3;
    double u_offset = -1.0;
    std::size_t pair_check_seeds = 16;
    bool backward = false;
    SolverConfig solver{};
};

/// Below this relative amplitude the data is numerically constant.
inline constexpr double sweep_noise_floor = 1e-12;

inline ScenarioReport scenario_random_hyperbolic_sweep(const PressureLaw& law, std::size_t n_seeds,
                                                       double t_max, const SweepOptions& opt = {})
{
    ScenarioReport r{opt.backward ? "random_sweep_backward" : "random_sweep", law,
                     static_cast<std::int64_t>(opt.base_seed)};
    r.thresholds["completed_runs"] = 0.0;
    r.thresholds["relative_amplitude_floor"] = sweep_noise_floor;
    r.thresholds["bb_pair_violations"] = 0.0;
    r.metrics["n_seeds"] = static_cast<double>(n_seeds);
    r.metrics["t_max"] = t_max;
    r.metrics["n"] = static_cast<double>(opt.n);

    const PeriodicGrid grid(opt.n);
    std::size_t completed = 0, blowups = 0, lost = 0, refused = 0, inconclusive = 0;
    std::size_t violations = 0;
    double t_last = 0.0;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        RandomTrigData d{opt.base_seed + i, opt.modes, opt.amplitude, opt.u_offset};
        // Data at round-off level is constant for all practical purposes and
        // cannot be judged either way; the solver would only see FFT noise.
        if (effective_amplitude(d) / std::abs(d.u_offset) < sweep_noise_floor) {
            ++inconclusive;
            continue;
        }
        SolverConfig cfg = opt.solver;
        cfg.t_max = t_max;
        cfg.backward = opt.backward;
        const auto traj = run(law, realize(law, grid, d), 0.0, cfg);
        switch (traj.status()) {
        case RunStatus::completed: ++completed; break;
        case RunStatus::blow_up_detected: ++blowups; break;
        case RunStatus::resolution_lost: ++lost; break;
        case RunStatus::admission_refused: ++refused; break;
        }
        if (traj.t_event())
            t_last = std::max(t_last, std::abs(*traj.t_event()));
        if (traj.snapshots().size() >= 2 && opt.pair_check_seeds > 0)
            violations += bb_pair_check(law, traj, opt.pair_check_seeds).violations;
    }
    r.metrics["completed_runs"] = static_cast<double>(completed);
    r.metrics["blow_up_detected_runs"] = static_cast<double>(blowups);
    r.metrics["resolution_lost_runs"] = static_cast<double>(lost);
    r.metrics["admission_refused_runs"] = static_cast<double>(refused);
    r.metrics["inconclusive_runs"] = static_cast<double>(inconclusive);
    r.metrics["latest_termination_time"] = t_last;
    r.metrics["bb_pair_violations"] = static_cast<double>(violations);

    const std::size_t conclusive = blowups + lost + completed;
    if (completed > 0 || violations > 0 || refused > 0) {
        r.verdict = Verdict::fail;
        if (completed > 0)
            r.reason = std::to_string(completed) + " nonconstant run(s) reached t_max";
        if (violations > 0)
            r.reason += (r.reason.empty() ? "" : "; ") + std::string("same-direction (B,B) pair across families");
        if (refused > 0)
            r.reason += (r.reason.empty() ? "" : "; ") + std::string("admission refused");
    } else if (conclusive == 0) {
        r.verdict = Verdict::inconclusive;
        r.reason = "all seeds below the relative amplitude floor";
    } else {
        r.verdict = Verdict::pass;
    }
    return r;
}

// ---------------------------------------------------------------------------
// The exact solution u = t, v = -x of the quadratic law.

inline ScenarioReport scenario_remark_residual(const PressureLaw& law = PressureLaw::quadratic())
{
    ScenarioReport r{"remark_residual", law};
    r.thresholds["residual"] = 0.0;
    r.thresholds["v_period_jump"] = -1.0;
    if (law.kind != LawKind::quadratic) {
        r.verdict = Verdict::fail;
        r.reason = "remark residual is stated for the quadratic law";
        return r;
    }
    // Exact partial derivatives of (u, v) = (t, -x).
    auto u = [](double t, double) { return t; };
    auto v = [](double, double x) { return -x; };
    auto u_t = [](double, double) { return 1.0; };
    auto u_x = [](double, double) { return 0.0; };
    auto v_t = [](double, double) { return 0.0; };
    auto v_x = [](double, double) { return -1.0; };

    double res1 = 0.0, res2 = 0.0, jump_err = 0.0, u_period = 0.0;
    std::size_t points = 0;
    for (int it = -8; it <= 8; ++it) {
        const double t = 0.25 * it;
        for (int ix = 0; ix < 16; ++ix) {
            const double x = ix / 16.0;
            // u_t + v_x = 0 and v_t - p'(u) u_x = 0
            res1 = std::max(res1, std::abs(u_t(t, x) + v_x(t, x)));
            res2 = std::max(res2, std::abs(v_t(t, x) - eval_dp(law, u(t, x)) * u_x(t, x)));
            jump_err = std::max(jump_err, std::abs((v(t, x + 1.0) - v(t, x)) - (-1.0)));
            u_period = std::max(u_period, std::abs(u(t, x + 1.0) - u(t, x)));
            ++points;
        }
    }
    r.metrics["points"] = static_cast<double>(points);
    r.metrics["max_residual_mass"] = res1;
    r.metrics["max_residual_momentum"] = res2;
    r.metrics["v_period_jump"] = v(0.0, 1.0) - v(0.0, 0.0);
    r.metrics["v_period_jump_error"] = jump_err;
    r.metrics["u_period_jump"] = u_period;
    r.verdict = (res1 == 0.0 && res2 == 0.0 && jump_err == 0.0 && u_period == 0.0)
                    ? Verdict::pass
                    : Verdict::fail;
    return r;
}

// ---------------------------------------------------------------------------
// Riccati closed form vs. direct ODE integration along a virtual curve.

struct UProfile {
    std::string name;
    std::function<double(double)> u; ///< u(t), must stay negative
    double t_begin = 0.0;
    double t_end = 2.0;
};

inline UProfile constant_profile(double u0 = -1.0, double t_end = 2.0)
{
    return {"constant", [u0](double) { return u0; }, 0.0, t_end};
}

inline UProfile linear_profile(double t_end = 2.0)
{
    return {"linear", [](double t) { return -(1.0 + t); }, 0.0, t_end};
}

/// int k(u(t)) dt over the profile window by adaptive Gauss-Kronrod.
inline double accumulated_k(const PressureLaw& law, const UProfile& prof)
{
    auto k = [&](double t) { return riccati_k(law, prof.u(t)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(k, prof.t_begin,
                                                                          prof.t_end, 15, 1e-14);
}

/// beta(t_end) from integrating beta' = -k(u(t)) beta^2 with adaptive
/// Dormand-Prince at abs/rel 1e-12.
inline double integrate_riccati_ode(const PressureLaw& law, const UProfile& prof, double beta0)
{
    namespace ode = boost::numeric::odeint;
    using stepper_t = ode::runge_kutta_dopri5<double>;
    double beta = beta0;
    auto sys = [&](const double& b, double& db, double t) {
        db = -riccati_k(law, prof.u(t)) * b * b;
    };
    ode::integrate_adaptive(ode::make_controlled<stepper_t>(1e-12, 1e-12), sys, beta,
                            prof.t_begin, prof.t_end, 1e-3);
    return beta;
}

inline ScenarioReport scenario_riccati_crosscheck(const PressureLaw& law, const UProfile& prof)
{
    ScenarioReport r{"riccati_crosscheck_" + prof.name, law};
    r.thresholds["relative_gap"] = 1e-6;
    const double K = accumulated_k(law, prof);
    const double beta_crit = -1.0 / K;
    r.metrics["K_total"] = K;
    r.metrics["beta_crit"] = beta_crit;

    const double grid[] = {-2.0, -0.5, 0.0, 0.1, 0.9 * beta_crit};
    double worst = 0.0;
    for (double b0 : grid) {
        const double closed = riccati_evolve(b0, K);
        const double numeric = integrate_riccati_ode(law, prof, b0);
        const double gap = closed == 0.0 ? std::abs(numeric)
                                         : std::abs(numeric - closed) / std::abs(closed);
        worst = std::max(worst, gap);
    }
    r.metrics["max_relative_gap"] = worst;
    r.verdict = worst < r.thresholds["relative_gap"] ? Verdict::pass : Verdict::fail;
    return r;
}

// ---------------------------------------------------------------------------
// Energy identity and concavity on elliptic fields.

/// Random smooth field with u in [0.1, 3] and v of unit amplitude.
inline StateField random_elliptic_field(const PeriodicGrid& grid, std::mt19937_64& rng,
                                        int modes = 8)
{
    auto u = detail::random_trig_poly(grid, modes, rng);
    auto v = detail::random_trig_poly(grid, modes, rng);
    for (double& x : u)
        x = 1.55 + 1.45 * x;
    return {grid, std::move(u), std::move(v)};
}

inline ScenarioReport scenario_energy_identity(const PressureLaw& law,
                                               const std::vector<StateField>& fields)
{
    ScenarioReport r{"energy_identity", law};
    r.thresholds["identity_gap"] = 1e-8;
    r.thresholds["ddot_formula_max"] = 1e-10;
    r.thresholds["analytic_case_error"] = 1e-8;
    r.metrics["n_fields"] = static_cast<double>(fields.size());

    double gap = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    try {
        for (const auto& f : fields)
            for (GaugeKind g : {GaugeKind::log1p, GaugeKind::rational}) {
                const auto d = energy_diagnostics(law, f, ConcaveGauge{g});
                gap = std::max(gap, d.identity_gap);
                worst = std::max(worst, d.ddot_formula);
            }
    } catch (const DomainError& e) {
        r.verdict = Verdict::fail;
        r.reason = e.what();
        return r;
    }
    r.metrics["max_identity_gap"] = gap;
    r.metrics["max_ddot_formula"] = worst;

    // u = 1, v = sin(2 pi x), log1p: -(1/4) * mean((2 pi cos)^2) = -pi^2/2 (any law: u_x = 0).
    const PeriodicGrid grid(256);
    const StateField analytic(grid, std::vector<double>(grid.n(), 1.0),
                              grid.sample([](double x) { return std::sin(2.0 * std::numbers::pi * x); }));
    const double expected = -std::numbers::pi * std::numbers::pi / 2.0;
    const auto a = energy_diagnostics(law, analytic, ConcaveGauge{GaugeKind::log1p});
    const double analytic_err =
        std::max(std::abs(a.ddot_formula - expected), std::abs(a.ddot_direct - expected));
    r.metrics["analytic_case_value"] = a.ddot_formula;
    r.metrics["analytic_case_error"] = analytic_err;

    const bool ok = gap < r.thresholds["identity_gap"] &&
                    worst <= r.thresholds["ddot_formula_max"] &&
                    analytic_err < r.thresholds["analytic_case_error"];
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    return r;
}

inline ScenarioReport scenario_energy_identity(std::size_t n_fields, std::uint64_t seed,
                                               const PressureLaw& law = PressureLaw::quadratic(),
                                               std::size_t n = 256)
{
    const PeriodicGrid grid(n);
    std::mt19937_64 rng(seed);
    std::vector<StateField> fields;
    fields.reserve(n_fields);
    for (std::size_t i = 0; i < n_fields; ++i)
        fields.push_back(random_elliptic_field(grid, rng));
    auto r = scenario_energy_identity(law, fields);
    r.seed = static_cast<std::int64_t>(seed);
    return r;
}

// ---------------------------------------------------------------------------

struct SuiteOptions {
    std::size_t sweep_seeds = 20;
    std::size_t quartic_sweep_seeds = 10;
    std::size_t backward_sweep_seeds = 5;
    double sweep_t_max = 50.0;
    std::size_t energy_fields = 50;
    std::uint64_t energy_seed = 42;
};

/// Scenario ids understood by run_suite, in execution order.
inline const std::vector<std::string>& suite_scenario_ids()
{
    static const std::vector<std::string> ids{
        "constant",        "simple_wave_quadratic", "simple_wave_quartic",
        "random_sweep",    "random_sweep_quartic",  "random_sweep_backward",
        "remark_residual", "riccati_crosscheck",    "energy_identity"};
    return ids;
}

/// Runs one named group of the default suite.
inline std::vector<ScenarioReport> run_suite_entry(const std::string& id, const SuiteOptions& o = {})
{
    const auto quad = PressureLaw::quadratic();
    if (id == "constant") {
        return {scenario_constant(quad, -1.0, 0.0, 10.0), scenario_constant(quad, -4.0, 2.5, 10.0),
                scenario_constant(PressureLaw::quartic(0.1), -1.0, 0.0, 10.0)};
    }
    if (id == "simple_wave_quadratic")
        return {scenario_simple_wave_blowup(quad, {-1.0, 0.3, 1, 0.0})};
    if (id == "simple_wave_quartic")
        return {scenario_simple_wave_blowup(PressureLaw::quartic(0.05), {-1.0, 0.2, 1, 0.0})};
    if (id == "random_sweep")
        return {scenario_random_hyperbolic_sweep(quad, o.sweep_seeds, o.sweep_t_max)};
    if (id == "random_sweep_quartic")
        return {scenario_random_hyperbolic_sweep(PressureLaw::quartic(0.1), o.quartic_sweep_seeds,
                                                 o.sweep_t_max)};
    if (id == "random_sweep_backward") {
        SweepOptions so;
        so.backward = true;
        so.base_seed = 1000;
        return {scenario_random_hyperbolic_sweep(quad, o.backward_sweep_seeds, o.sweep_t_max, so)};
    }
    if (id == "remark_residual")
        return {scenario_remark_residual()};
    if (id == "riccati_crosscheck")
        return {scenario_riccati_crosscheck(quad, constant_profile()),
                scenario_riccati_crosscheck(quad, linear_profile())};
    if (id == "energy_identity")
        return {scenario_energy_identity(o.energy_fields, o.energy_seed)};
    throw ConfigError("unknown scenario id '" + id + "'");
}

} // namespace psys
