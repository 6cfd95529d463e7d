#pragma once

// Static diagnostics for fields in the elliptic region u >= 0:
//   E      = int f(u) dx
//   E''    = int f''(u) (v_x^2 + p'(u) u_x^2) dx              (formula)
//   E''    = int f''(u) u_t^2 + f'(u) u_tt dx,
//            u_t = -v_x, u_tt = -(p(u))_xx                     (direct)
// The two agree by one integration by parts on the circle. With f concave
// and p' >= 0 on u >= 0 the formula is nonpositive.

#include <cmath>
#include <string>
#include <vector>

#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/pressure.hpp"

namespace psys {

enum class GaugeKind { log1p, rational };

/// f(u) = log(1+u) or u/(1+u): f(0) = 0, f > 0 and f'' < 0 on u >= 0.
struct ConcaveGauge {
    GaugeKind kind = GaugeKind::log1p;

    double f(double u) const
    {
        return kind == GaugeKind::log1p ? std::log1p(u) : u / (1.0 + u);
    }
    double df(double u) const
    {
        const double a = 1.0 + u;
        return kind == GaugeKind::log1p ? 1.0 / a : 1.0 / (a * a);
    }
    double ddf(double u) const
    {
        const double a = 1.0 + u;
        return kind == GaugeKind::log1p ? -1.0 / (a * a) : -2.0 / (a * a * a);
    }
};

inline const char* to_string(GaugeKind g) { return g == GaugeKind::log1p ? "log1p" : "rational"; }

namespace detail {

inline void require_elliptic(const StateField& state, const char* op)
{
    for (double u : state.u())
        if (u < -1e-12)
            throw DomainError(std::string(op) + ": requires u >= 0 everywhere, found u = " +
                              std::to_string(u));
}

} // namespace detail

inline double energy(const StateField& state, const ConcaveGauge& gauge)
{
    detail::require_elliptic(state, "energy");
    double s = 0.0;
    for (double u : state.u())
        s += gauge.f(u);
    return s / static_cast<double>(state.grid().n());
}

inline double energy_ddot_formula(const PressureLaw& law, const StateField& state,
                                  const ConcaveGauge& gauge)
{
    detail::require_elliptic(state, "energy_ddot_formula");
    const auto& grid = state.grid();
    const auto ux = spectral_derivative(grid, state.u());
    const auto vx = spectral_derivative(grid, state.v());
    const auto u = state.u();
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n(); ++j)
        s += gauge.ddf(u[j]) * (vx[j] * vx[j] + eval_dp(law, u[j]) * ux[j] * ux[j]);
    return s / static_cast<double>(grid.n());
}

inline double energy_ddot_direct(const PressureLaw& law, const StateField& state,
                                 const ConcaveGauge& gauge)
{
    detail::require_elliptic(state, "energy_ddot_direct");
    const auto& grid = state.grid();
    const auto u = state.u();
    std::vector<double> pu(grid.n());
    for (std::size_t j = 0; j < grid.n(); ++j)
        pu[j] = eval_p(law, u[j]);
    const auto vx = spectral_derivative(grid, state.v());
    const auto pxx = spectral_derivative(grid, pu, 2);
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const double ut = -vx[j];
        const double utt = -pxx[j];
        s += gauge.ddf(u[j]) * ut * ut + gauge.df(u[j]) * utt;
    }
    return s / static_cast<double>(grid.n());
}

struct EnergyDiagnostics {
    double energy;
    double ddot_formula;
    double ddot_direct;
    double identity_gap;
};

inline EnergyDiagnostics energy_diagnostics(const PressureLaw& law, const StateField& state,
                                            const ConcaveGauge& gauge)
{
    const double e = energy(state, gauge);
    const double f = energy_ddot_formula(law, state, gauge);
    const double d = energy_ddot_direct(law, state, gauge);
    return {e, f, d, std::abs(d - f)};
}

} // namespace psys
