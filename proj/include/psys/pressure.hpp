#pragma once

// Quadratic-like pressure laws: p'' > 0 everywhere, minimum value 0 at u = 0.
// The system is hyperbolic where p'(u) < 0 (u < 0) and elliptic where p'(u) > 0.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "psys/errors.hpp"

namespace psys {

enum class LawKind { quadratic, quartic };

/// p(u) = u^2/2 (quadratic) or u^2/2 + a*u^4 (quartic, a >= 0).
struct PressureLaw {
    LawKind kind = LawKind::quadratic;
    double quartic_a = 0.0;

    static PressureLaw quadratic() { return {}; }
    static PressureLaw quartic(double a)
    {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw DomainError("quartic coefficient must be finite and >= 0, got " + std::to_string(a));
        return {LawKind::quartic, a};
    }

    bool operator==(const PressureLaw&) const = default;
};

inline double eval_p(const PressureLaw& law, double u)
{
    const double u2 = u * u;
    if (law.kind == LawKind::quadratic)
        return 0.5 * u2;
    return 0.5 * u2 + law.quartic_a * u2 * u2;
}

inline double eval_dp(const PressureLaw& law, double u)
{
    if (law.kind == LawKind::quadratic)
        return u;
    return u + 4.0 * law.quartic_a * u * u * u;
}

inline double eval_ddp(const PressureLaw& law, double u)
{
    if (law.kind == LawKind::quadratic)
        return 1.0;
    return 1.0 + 12.0 * law.quartic_a * u * u;
}

/// Short descriptor used in reports and config echo, e.g. "quartic(a=0.1)".
inline std::string describe(const PressureLaw& law)
{
    if (law.kind == LawKind::quadratic)
        return "quadratic";
    char buf[64];
    std::snprintf(buf, sizeof buf, "quartic(a=%.17g)", law.quartic_a);
    return buf;
}

struct LawViolation {
    enum class Kind { nonconvex, nonzero_minimum, nonzero_slope_at_zero };
    Kind kind;
    double u;
    double value;
};

struct ValidationReport {
    double u_min = 0.0;
    double u_max = 0.0;
    std::size_t n_samples = 0;
    std::vector<LawViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Samples p'' on [u_min, u_max] and checks p(0) = p'(0) = 0.
/// Templated on the evaluator so that candidate laws outside the built-in
/// families can be screened too.
template <class P, class DP, class DDP>
ValidationReport validate_law(P&& p, DP&& dp, DDP&& ddp, double u_min, double u_max,
                              std::size_t n_samples)
{
    if (!(u_min < u_max))
        throw DomainError("validate_law: need u_min < u_max");
    if (n_samples < 2)
        throw DomainError("validate_law: need n_samples >= 2");

    ValidationReport report{u_min, u_max, n_samples, {}};
    const double h = (u_max - u_min) / static_cast<double>(n_samples - 1);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double u = (i + 1 == n_samples) ? u_max : u_min + h * static_cast<double>(i);
        const double c = ddp(u);
        if (!(c > 0.0))
            report.violations.push_back({LawViolation::Kind::nonconvex, u, c});
    }
    if (const double p0 = p(0.0); std::abs(p0) > 0.0)
        report.violations.push_back({LawViolation::Kind::nonzero_minimum, 0.0, p0});
    if (const double dp0 = dp(0.0); std::abs(dp0) > 0.0)
        report.violations.push_back({LawViolation::Kind::nonzero_slope_at_zero, 0.0, dp0});
    return report;
}

inline ValidationReport validate_law(const PressureLaw& law, double u_min, double u_max,
                                     std::size_t n_samples)
{
    return validate_law([&](double u) { return eval_p(law, u); },
                        [&](double u) { return eval_dp(law, u); },
                        [&](double u) { return eval_ddp(law, u); }, u_min, u_max, n_samples);
}

inline const char* to_string(LawViolation::Kind k)
{
    switch (k) {
    case LawViolation::Kind::nonconvex: return "nonconvex";
    case LawViolation::Kind::nonzero_minimum: return "nonzero_minimum";
    case LawViolation::Kind::nonzero_slope_at_zero: return "nonzero_slope_at_zero";
    }
    return "?";
}

} // namespace psys
