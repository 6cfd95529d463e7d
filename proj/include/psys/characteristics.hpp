#pragma once

// Characteristic curves dx/dt = +/- sqrt(-p'(u)) traced through a computed
// Trajectory, with Riemann invariants, the Riccati variable beta and the
// accumulated int k ds recorded along the way. Built on top of that:
// blow-up prediction from the closed-form Riccati solution, invariant drift,
// and a finite-horizon version of the A/B classification of curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/pressure.hpp"
#include "psys/riemann.hpp"
#include "psys/solver.hpp"

namespace psys {

enum class Direction { forward, backward };

inline const char* to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

enum class Termination { reached_horizon, reached_boundary, left_trajectory_window };

inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::reached_horizon: return "reached_horizon";
    case Termination::reached_boundary: return "reached_boundary";
    case Termination::left_trajectory_window: return "left_trajectory_window";
    }
    return "?";
}

struct CurveSample {
    double t;
    double x; ///< lifted (not wrapped) position
    double u;
    double r1;
    double r2;
    double beta;    ///< beta of the curve's own family
    double k_accum; ///< int_{t_start}^t k ds
};

struct CharacteristicCurve {
    Family family = Family::first;
    Direction direction = Direction::forward;
    std::vector<CurveSample> samples;
    Termination termination = Termination::left_trajectory_window;
    /// Set when termination == reached_boundary.
    std::optional<double> t_hit;

    double t_start() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
};

/// Point values of u, v and their x-derivatives.
struct PointState {
    double u;
    double u_x;
    double v;
    double v_x;
};

/// Space-time evaluator over a Trajectory: trigonometric interpolation in x,
/// cubic Lagrange interpolation in t over the 4 nearest snapshots.
/// Space-time interpolant over a trajectory's snapshots. Each snapshot keeps
/// u, v and their spectral derivatives on the grid; points in between are
/// reached by 8-point periodic Lagrange in x and cubic Lagrange in t.
class TrajectoryInterpolant {
public:
    static constexpr std::size_t stencil = 8;

    explicit TrajectoryInterpolant(const Trajectory& traj)
    {
        const auto& snaps = traj.snapshots();
        std::vector<std::size_t> order(snaps.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        if (!traj.forward())
            std::reverse(order.begin(), order.end());
        n_ = traj.grid().n();
        times_.reserve(order.size());
        data_.reserve(order.size());
        for (std::size_t i : order) {
            const auto& s = snaps[i];
            times_.push_back(s.t);
            const auto& g = s.state.grid();
            const auto ux = spectral_derivative(g, s.state.u());
            const auto vx = spectral_derivative(g, s.state.v());
            std::vector<double> packed(4 * n_);
            for (std::size_t j = 0; j < n_; ++j) {
                packed[4 * j + 0] = s.state.u()[j];
                packed[4 * j + 1] = ux[j];
                packed[4 * j + 2] = s.state.v()[j];
                packed[4 * j + 3] = vx[j];
            }
            data_.push_back(std::move(packed));
        }
    }

    double t_lo() const { return times_.front(); }
    double t_hi() const { return times_.back(); }
    std::size_t size() const { return times_.size(); }

    /// Median spacing between consecutive snapshots.
    double typical_spacing() const
    {
        if (times_.size() < 2)
            return 0.0;
        std::vector<double> d(times_.size() - 1);
        for (std::size_t i = 0; i + 1 < times_.size(); ++i)
            d[i] = times_[i + 1] - times_[i];
        std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
        return d[d.size() / 2];
    }

    PointState at(double t, double x) const
    {
        const std::size_t m = times_.size();
        const std::size_t width = std::min<std::size_t>(4, m);
        // first index i with times_[i] > t, then centre a window of `width` on it
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::ptrdiff_t hi = it - times_.begin();
        std::ptrdiff_t lo = hi - static_cast<std::ptrdiff_t>(width / 2);
        lo = std::clamp<std::ptrdiff_t>(lo, 0, static_cast<std::ptrdiff_t>(m - width));

        // spatial stencil: nodes j0-3 .. j0+4 around the cell holding x
        const double xs = TrigInterpolant::wrap(x) * static_cast<double>(n_);
        double cell = std::floor(xs);
        const double frac = xs - cell;
        const auto j0 = static_cast<std::ptrdiff_t>(cell);
        double wx[stencil];
        std::size_t idx[stencil];
        constexpr std::ptrdiff_t off = static_cast<std::ptrdiff_t>(stencil / 2) - 1;
        int exact = -1;
        for (std::size_t a = 0; a < stencil; ++a) {
            const std::ptrdiff_t j = j0 - off + static_cast<std::ptrdiff_t>(a);
            const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n_);
            idx[a] = static_cast<std::size_t>(((j % nn) + nn) % nn);
            const double na = static_cast<double>(static_cast<std::ptrdiff_t>(a) - off);
            if (frac == na)
                exact = static_cast<int>(a);
            double w = 1.0;
            for (std::size_t b = 0; b < stencil; ++b) {
                if (b == a)
                    continue;
                const double nb = static_cast<double>(static_cast<std::ptrdiff_t>(b) - off);
                w *= (frac - nb) / (na - nb);
            }
            wx[a] = w;
        }
        if (exact >= 0)
            for (std::size_t a = 0; a < stencil; ++a)
                wx[a] = static_cast<int>(a) == exact ? 1.0 : 0.0;

        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t a = 0; a < width; ++a) {
            const std::size_t ia = static_cast<std::size_t>(lo) + a;
            double w = 1.0;
            for (std::size_t b = 0; b < width; ++b) {
                const std::size_t ib = static_cast<std::size_t>(lo) + b;
                if (ib != ia)
                    w *= (t - times_[ib]) / (times_[ia] - times_[ib]);
            }
            if (w == 0.0)
                continue;
            const double* d = data_[ia].data();
            for (std::size_t k = 0; k < stencil; ++k) {
                const double c = w * wx[k];
                const double* row = d + 4 * idx[k];
                acc[0] += c * row[0];
                acc[1] += c * row[1];
                acc[2] += c * row[2];
                acc[3] += c * row[3];
            }
        }
        return {acc[0], acc[1], acc[2], acc[3]};
    }

private:
    std::size_t n_ = 0;
    std::vector<double> times_;             // ascending
    std::vector<std::vector<double>> data_; // per snapshot: (u, u_x, v, v_x) per node
};

struct TraceOptions {
    double eps_b = 1e-3;
    /// > 0 stops the curve after this much elapsed time.
    double horizon = 0.0;
    /// Integration step; 0 picks the median snapshot spacing.
    double step = 0.0;
    /// Start time; unset means the trajectory's initial snapshot time.
    std::optional<double> t_start;
};

namespace detail {

inline CurveSample make_sample(const PressureLaw& law, Family fam, double t, double x,
                               const PointState& ps, double k_accum)
{
    const double u = ps.u;
    const double q = q_of_u(law, std::min(u, 0.0));
    const double c = sound_speed(law, u);
    // r1_x = v_x - q'(u) u_x = v_x + c u_x ; r2_x = v_x - c u_x
    const double r_x = fam == Family::first ? ps.v_x + c * ps.u_x : ps.v_x - c * ps.u_x;
    return {t, x, u, ps.v - q, ps.v + q, r_x * std::sqrt(c), k_accum};
}

} // namespace detail

/// Trace one characteristic of family `fam` from (t_start, x0) with RK4.
inline CharacteristicCurve trace(const PressureLaw& law, const TrajectoryInterpolant& field, double x0,
                                 Family fam, Direction dir, const TraceOptions& opt = {})
{
    if (field.size() < 2)
        throw WindowTooShort("trace: trajectory needs at least 2 snapshots");

    const double t_begin = opt.t_start.value_or(std::numeric_limits<double>::quiet_NaN());
    if (!std::isfinite(t_begin))
        throw DomainError("trace: start time must be set when using a bare interpolant");
    const double sgn_t = dir == Direction::forward ? 1.0 : -1.0;
    const double sgn_x = family_sign(fam);
    const double t_wall = dir == Direction::forward ? field.t_hi() : field.t_lo();
    double t_stop = t_wall;
    bool horizon_first = false;
    if (opt.horizon > 0.0) {
        const double t_h = t_begin + sgn_t * opt.horizon;
        if (sgn_t * (t_h - t_wall) <= 0.0) {
            t_stop = t_h;
            horizon_first = true;
        }
    }
    const double h_base = opt.step > 0.0 ? opt.step : field.typical_spacing();
    if (!(h_base > 0.0))
        throw WindowTooShort("trace: cannot infer a step from the trajectory");

    CharacteristicCurve curve;
    curve.family = fam;
    curve.direction = dir;

    PointState ps = field.at(t_begin, TrigInterpolant::wrap(x0));
    if (!(ps.u < 0.0))
        throw EllipticStart("trace: u(t0, x0) = " + std::to_string(ps.u) + " is not hyperbolic");

    curve.samples.push_back(detail::make_sample(law, fam, t_begin, x0, ps, 0.0));
    double k_prev = riccati_k(law, ps.u);
    if (ps.u > -opt.eps_b) {
        curve.termination = Termination::reached_boundary;
        curve.t_hit = t_begin;
        return curve;
    }

    auto speed = [&](double t, double x) {
        const double u = field.at(t, TrigInterpolant::wrap(x)).u;
        return sgn_x * detail::sound_speed(law, u);
    };

    double t = t_begin;
    double x = x0;
    double k_accum = 0.0;
    while (sgn_t * (t_stop - t) > 1e-13 * std::max(1.0, std::abs(t_stop))) {
        double h = h_base;
        bool final_step = false;
        if (sgn_t * (t + sgn_t * h - t_stop) >= -1e-12 * h) {
            h = std::abs(t_stop - t);
            final_step = true;
        }
        const double dt = sgn_t * h;
        const double k1 = speed(t, x);
        const double k2 = speed(t + 0.5 * dt, x + 0.5 * dt * k1);
        const double k3 = speed(t + 0.5 * dt, x + 0.5 * dt * k2);
        const double k4 = speed(t + dt, x + dt * k3);
        const double t_new = final_step ? t_stop : t + dt;
        const double x_new = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;

        const PointState ps_new = field.at(t_new, TrigInterpolant::wrap(x_new));
        if (ps_new.u > -opt.eps_b) {
            const double u_prev = curve.samples.back().u;
            const double frac = (-opt.eps_b - u_prev) / (ps_new.u - u_prev);
            curve.termination = Termination::reached_boundary;
            curve.t_hit = t + std::clamp(frac, 0.0, 1.0) * (t_new - t);
            return curve;
        }
        const double k_new = riccati_k(law, ps_new.u);
        k_accum += 0.5 * (k_prev + k_new) * (t_new - t);
        k_prev = k_new;
        curve.samples.push_back(detail::make_sample(law, fam, t_new, x_new, ps_new, k_accum));
        t = t_new;
        x = x_new;
        if (final_step)
            break;
    }
    curve.termination =
        horizon_first ? Termination::reached_horizon : Termination::left_trajectory_window;
    return curve;
}

/// Convenience overload: builds the interpolant and starts at the
/// trajectory's first snapshot unless opt.t_start says otherwise.
inline CharacteristicCurve trace(const PressureLaw& law, const Trajectory& traj, double x0,
                                 Family fam, Direction dir, TraceOptions opt = {})
{
    if (traj.snapshots().size() < 2)
        throw WindowTooShort("trace: trajectory needs at least 2 snapshots");
    if (!opt.t_start)
        opt.t_start = traj.t0();
    return trace(law, TrajectoryInterpolant(traj), x0, fam, dir, opt);
}

/// max |r_fam(t) - r_fam(t_start)| over samples with elapsed time <= until
/// (all samples by default).
inline double invariant_drift(const CharacteristicCurve& curve,
                              double until = std::numeric_limits<double>::infinity())
{
    if (curve.samples.empty())
        throw DomainError("invariant_drift: empty curve");
    auto own = [&](const CurveSample& s) { return curve.family == Family::first ? s.r1 : s.r2; };
    const double r0 = own(curve.samples.front());
    const double t0 = curve.samples.front().t;
    double drift = 0.0;
    for (const auto& s : curve.samples) {
        if (std::abs(s.t - t0) > until)
            break;
        drift = std::max(drift, std::abs(own(s) - r0));
    }
    return drift;
}

enum class Extrapolation { none, final_slope };

/// Earliest t with 1 + beta0*K_accum(t) <= 0, K_accum linearly interpolated
/// between samples. With Extrapolation::final_slope a curve that leaves the
/// window (or reaches its horizon) without a root is continued with the last
/// sampled k, which is exact when u is constant along the curve.
inline std::optional<double> predict_blowup(const PressureLaw& law, const CharacteristicCurve& curve,
                                            double beta0,
                                            Extrapolation mode = Extrapolation::none)
{
    if (beta0 == 0.0 || curve.samples.empty())
        return std::nullopt;
    const auto& s = curve.samples;
    double g_prev = 1.0 + beta0 * s.front().k_accum;
    if (g_prev <= 0.0)
        return s.front().t;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double g = 1.0 + beta0 * s[i].k_accum;
        if (g <= 0.0) {
            const double frac = g_prev / (g_prev - g);
            return s[i - 1].t + frac * (s[i].t - s[i - 1].t);
        }
        g_prev = g;
    }
    if (mode == Extrapolation::none || curve.termination == Termination::reached_boundary)
        return std::nullopt;

    const auto& last = s.back();
    if (!(last.u < 0.0))
        return std::nullopt;
    const double k = riccati_k(law, last.u);
    // 1 + beta0*(K + k*(t - t_last)) = 0
    const double dt = (-1.0 / beta0 - last.k_accum) / k;
    const double sgn_t = curve.direction == Direction::forward ? 1.0 : -1.0;
    if (!(sgn_t * dt > 0.0) || !std::isfinite(dt))
        return std::nullopt;
    return last.t + dt;
}

/// beta of family `fam` at x0 from the spectral gradients of a snapshot.
inline double initial_beta(const PressureLaw& law, const StateField& state, double x0, Family fam)
{
    const TrigInterpolant u(state.grid(), state.u());
    const TrigInterpolant v(state.grid(), state.v());
    const auto us = u.eval(x0);
    const auto vs = v.eval(x0);
    return detail::make_sample(law, fam, 0.0, x0, {us.value, us.slope, vs.value, vs.slope}, 0.0)
        .beta;
}

enum class ClassLabel { A_plus, A_minus, B_plus, B_minus, undetermined };

inline const char* to_string(ClassLabel c)
{
    switch (c) {
    case ClassLabel::A_plus: return "A_plus";
    case ClassLabel::A_minus: return "A_minus";
    case ClassLabel::B_plus: return "B_plus";
    case ClassLabel::B_minus: return "B_minus";
    case ClassLabel::undetermined: return "undetermined";
    }
    return "?";
}

struct ClassifyOptions {
    double growth_factor = 10.0;
    double eps_b = 1e-3;
};

/// Finite-horizon proxy for the A/B dichotomy.
///   B: the curve spans the horizon, -u(end) > growth * -u(start), and -u is
///      increasing over the final quarter of the horizon.
///   A: the curve hit the boundary u = -eps_b, or spans the horizon with -u
///      bounded by growth * -u(start).
///   undetermined otherwise.
inline ClassLabel classify(const CharacteristicCurve& curve, double horizon,
                           const ClassifyOptions& opt = {})
{
    const bool fwd = curve.direction == Direction::forward;
    const ClassLabel a = fwd ? ClassLabel::A_plus : ClassLabel::A_minus;
    const ClassLabel b = fwd ? ClassLabel::B_plus : ClassLabel::B_minus;
    if (curve.samples.empty())
        return ClassLabel::undetermined;
    if (curve.termination == Termination::reached_boundary)
        return a;
    const double t0 = curve.t_start();
    const double tol = 1e-9 * std::max(1.0, horizon);
    if (std::abs(curve.t_end() - t0) + tol < horizon)
        return ClassLabel::undetermined;

    const double depth0 = -curve.samples.front().u;
    double depth_max = depth0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        if (std::abs(curve.samples[i].t - t0) > horizon + tol)
            break;
        end = i;
        depth_max = std::max(depth_max, -curve.samples[i].u);
    }
    const double depth_end = -curve.samples[end].u;

    if (depth_end > opt.growth_factor * depth0) {
        bool increasing = true;
        for (std::size_t i = 1; i <= end; ++i) {
            if (std::abs(curve.samples[i - 1].t - t0) < 0.75 * horizon)
                continue;
            if (-curve.samples[i].u < -curve.samples[i - 1].u) {
                increasing = false;
                break;
            }
        }
        if (increasing)
            return b;
    }
    if (depth_max <= opt.growth_factor * depth0)
        return a;
    return ClassLabel::undetermined;
}

struct BBPairReport {
    Direction direction = Direction::forward;
    std::size_t seeds = 0;
    std::size_t skipped_seeds = 0; ///< seeds starting outside the hyperbolic region
    std::vector<ClassLabel> first;
    std::vector<ClassLabel> second;
    /// Same-direction (B, B) pairs across the two families.
    std::size_t violations = 0;

    std::size_t count(const std::vector<ClassLabel>& labels, ClassLabel c) const
    {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), c));
    }
};

/// Traces both families from equispaced seeds in the trajectory's own time
/// direction and counts (B, B) pairs; none should ever appear.
inline BBPairReport bb_pair_check(const PressureLaw& law, const Trajectory& traj,
                                       std::size_t sample_points, const ClassifyOptions& copt = {},
                                       double horizon = 0.0)
{
    BBPairReport report;
    report.direction = traj.forward() ? Direction::forward : Direction::backward;
    report.seeds = sample_points;
    if (traj.snapshots().size() < 2 || sample_points == 0)
        return report;

    const TrajectoryInterpolant field(traj);
    const double window = std::abs(traj.t_end() - traj.t0());
    const double hz = horizon > 0.0 ? std::min(horizon, window) : window;
    TraceOptions topt;
    topt.eps_b = copt.eps_b;
    topt.t_start = traj.t0();

    for (std::size_t i = 0; i < sample_points; ++i) {
        const double x0 = static_cast<double>(i) / static_cast<double>(sample_points);
        if (!(field.at(traj.t0(), x0).u < 0.0)) {
            ++report.skipped_seeds;
            continue;
        }
        report.first.push_back(
            classify(trace(law, field, x0, Family::first, report.direction, topt), hz, copt));
        report.second.push_back(
            classify(trace(law, field, x0, Family::second, report.direction, topt), hz, copt));
    }
    const ClassLabel b = report.direction == Direction::forward ? ClassLabel::B_plus
                                                                : ClassLabel::B_minus;
    report.violations = report.count(report.first, b) * report.count(report.second, b);
    return report;
}

} // namespace psys
