#pragma once

// Initial-data presets realized on a PeriodicGrid.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/pressure.hpp"
#include "psys/riemann.hpp"

namespace psys {

/// u = u0, v = v0. Hyperbolic runs need u0 < 0; any u0 is accepted here so
/// elliptic constants can be fed to the energy diagnostics.
struct ConstantData {
    double u0 = -1.0;
    double v0 = 0.0;
};

/// u = u_center + amplitude*sin(2 pi mode x), v = r2_const - q(u), so that
/// r2 = v + q(u) is identically r2_const: only r1 varies.
struct SimpleWaveData {
    double u_center = -1.0;
    double amplitude = 0.3;
    int mode = 1;
    double r2_const = 0.0;
};

/// Random band-limited data: u = u_offset + amplitude*U(x), v = amplitude*V(x)
/// with U, V random trigonometric polynomials of degree `modes` normalized to
/// max |.| = 1 on the grid. The amplitude is capped so that max u <= -0.05.
struct RandomTrigData {
    std::uint64_t seed = 0;
    int modes = 4;
    double amplitude = 0.3;
    double u_offset = -1.0;
};

/// Plain sinusoid with no sign constraint (elliptic/mixed diagnostics).
struct SineData {
    double u_center = 1.0;
    double amplitude = 0.5;
    int mode = 1;
    double v0 = 0.0;
    double v_amplitude = 0.0;
};

using InitialData = std::variant<ConstantData, SimpleWaveData, RandomTrigData, SineData>;

/// Largest allowed max u for random_trig data.
inline constexpr double random_trig_ceiling = -0.05;

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; portable across stdlibs.
inline double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> random_trig_poly(const PeriodicGrid& grid, int modes,
                                            std::mt19937_64& rng)
{
    std::vector<double> a(static_cast<std::size_t>(modes)), b(a.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double w = 1.0 / static_cast<double>(m + 1);
        a[m] = w * (2.0 * unit_uniform(rng) - 1.0);
        b[m] = w * (2.0 * unit_uniform(rng) - 1.0);
    }
    auto f = grid.sample([&](double x) {
        double s = 0.0;
        for (std::size_t m = 0; m < a.size(); ++m) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(m + 1) * x;
            s += a[m] * std::cos(th) + b[m] * std::sin(th);
        }
        return s;
    });
    const double peak = max_abs(f);
    if (peak > 0.0)
        for (double& x : f)
            x /= peak;
    return f;
}

} // namespace detail

/// Effective amplitude after the max u <= -0.05 cap.
inline double effective_amplitude(const RandomTrigData& d)
{
    return std::min(std::abs(d.amplitude), random_trig_ceiling - d.u_offset);
}

inline StateField realize(const PressureLaw& law, const PeriodicGrid& grid, const InitialData& data)
{
    return std::visit(
        [&](const auto& d) -> StateField {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantData>) {
                return StateField::constant(grid, d.u0, d.v0);
            } else if constexpr (std::is_same_v<T, SimpleWaveData>) {
                if (!(d.u_center + std::abs(d.amplitude) < 0.0))
                    throw DomainError("simple_wave: need u_center + |amplitude| < 0");
                auto u = grid.sample([&](double x) {
                    return d.u_center +
                           d.amplitude * std::sin(2.0 * std::numbers::pi * d.mode * x);
                });
                std::vector<double> v(u.size());
                for (std::size_t j = 0; j < u.size(); ++j)
                    v[j] = d.r2_const - q_of_u(law, u[j]);
                return {grid, std::move(u), std::move(v)};
            } else if constexpr (std::is_same_v<T, RandomTrigData>) {
                if (!(d.u_offset < random_trig_ceiling))
                    throw DomainError("random_trig: need u_offset < -0.05");
                if (d.modes < 1 || static_cast<std::size_t>(d.modes) >= grid.max_mode())
                    throw DomainError("random_trig: modes must lie in [1, n/2)");
                std::mt19937_64 rng(d.seed);
                const double amp = effective_amplitude(d);
                auto u = detail::random_trig_poly(grid, d.modes, rng);
                auto v = detail::random_trig_poly(grid, d.modes, rng);
                for (std::size_t j = 0; j < u.size(); ++j) {
                    u[j] = d.u_offset + amp * u[j];
                    v[j] = amp * v[j];
                }
                return {grid, std::move(u), std::move(v)};
            } else {
                auto u = grid.sample([&](double x) {
                    return d.u_center +
                           d.amplitude * std::sin(2.0 * std::numbers::pi * d.mode * x);
                });
                auto v = grid.sample([&](double x) {
                    return d.v0 + d.v_amplitude * std::sin(2.0 * std::numbers::pi * d.mode * x);
                });
                return {grid, std::move(u), std::move(v)};
            }
        },
        data);
}

/// Burgers crossing time for a simple wave: lambda_1 is transported by
/// itself, so t* = t0 - 1/min_x d(lambda_1)/dx, sampled on `samples` points
/// from the analytic profile. Empty when lambda_1 is nowhere decreasing.
inline std::optional<double> simple_wave_burgers_time(const PressureLaw& law,
                                                      const SimpleWaveData& d, double t0 = 0.0,
                                                      std::size_t samples = 100000)
{
    double slope_min = 0.0;
    const double two_pi_m = 2.0 * std::numbers::pi * d.mode;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(samples);
        const double u = d.u_center + d.amplitude * std::sin(two_pi_m * x);
        const double ux = d.amplitude * two_pi_m * std::cos(two_pi_m * x);
        // lambda_1 = sqrt(-p'(u)) => d/dx = -p''(u) u_x / (2 sqrt(-p'(u)))
        const double slope = -eval_ddp(law, u) * ux / (2.0 * std::sqrt(-eval_dp(law, u)));
        slope_min = std::min(slope_min, slope);
    }
    if (!(slope_min < 0.0))
        return std::nullopt;
    return t0 - 1.0 / slope_min;
}

} // namespace psys
