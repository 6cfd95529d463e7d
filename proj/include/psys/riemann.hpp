#pragma once

// Change of variables for the hyperbolic region u < 0.
//
//   q(u)  = int_u^0 sqrt(-p'(s)) ds          (q(0) = 0, q' = -sqrt(-p'))
//   r1,2  = v -/+ q(u)                       (Riemann invariants)
//   lambda_{1,2} = +/- sqrt(-p'(u))
//   beta  = r_x * (-p'(u))^{1/4},  k = -p''/(4 (-p')^{5/4})
//
// Along a characteristic of its own family beta obeys beta' + k beta^2 = 0,
// solved in closed form by beta0 / (1 + beta0 * int k).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "psys/errors.hpp"
#include "psys/pressure.hpp"

namespace psys {

struct RiemannPair {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// first <-> lambda = +sqrt(-p'), second <-> lambda = -sqrt(-p').
enum class Family { first, second };

inline const char* to_string(Family f) { return f == Family::first ? "first" : "second"; }

/// +1 for the first family, -1 for the second.
inline double family_sign(Family f) { return f == Family::first ? 1.0 : -1.0; }

namespace detail {

inline void require_nonpositive(double u, const char* op)
{
    if (!(u <= 0.0))
        throw DomainError(std::string(op) + ": requires u <= 0, got " + std::to_string(u));
}

inline void require_negative(double u, const char* op)
{
    if (!(u < 0.0))
        throw DomainError(std::string(op) + ": requires u < 0, got " + std::to_string(u));
}

/// Characteristic speed sqrt(-p'(u)), clamped to 0 where p'(u) >= 0.
inline double sound_speed(const PressureLaw& law, double u)
{
    const double m = -eval_dp(law, u);
    return m > 0.0 ? std::sqrt(m) : 0.0;
}

} // namespace detail

/// q(u) for u <= 0. Closed form for the quadratic law; otherwise the
/// substitution s = -w^2 removes the sqrt endpoint singularity at s = 0 and
/// the smooth integrand 2w*sqrt(-p'(-w^2)) goes to adaptive Gauss-Kronrod.
inline double q_of_u(const PressureLaw& law, double u)
{
    detail::require_nonpositive(u, "q_of_u");
    if (u == 0.0)
        return 0.0;
    if (law.kind == LawKind::quadratic)
        return (2.0 / 3.0) * std::pow(-u, 1.5);

    const double w_max = std::sqrt(-u);
    auto integrand = [&](double w) { return 2.0 * w * detail::sound_speed(law, -w * w); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, w_max,
                                                                          10, 1e-12);
}

/// Unique u <= 0 with q(u) = y. Bracketed TOMS 748 iteration; q is monotone so
/// the bracket [-max(1, 2*(3y/2)^{2/3}), 0] only ever needs to grow leftward.
inline double u_of_q(const PressureLaw& law, double y)
{
    if (!(y >= 0.0))
        throw DomainError("u_of_q: requires y >= 0, got " + std::to_string(y));
    if (y == 0.0)
        return 0.0;

    double left = -std::max(1.0, 2.0 * std::pow(1.5 * y, 2.0 / 3.0));
    auto residual = [&](double u) { return q_of_u(law, u) - y; };
    double f_left = residual(left);
    while (f_left < 0.0) {
        left *= 2.0;
        f_left = residual(left);
    }
    const double f_right = -y;
    if (f_left == 0.0)
        return left;

    std::uintmax_t max_iter = 200;
    auto tol = [](double a, double b) {
        return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(a), std::abs(b)) ||
               std::abs(a - b) <= 1e-300;
    };
    auto [a, b] = boost::math::tools::toms748_solve(residual, left, 0.0, f_left, f_right, tol,
                                                    max_iter);
    // Return whichever end leaves the smaller residual.
    return std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
}

inline RiemannPair riemann_from_state(const PressureLaw& law, double u, double v)
{
    detail::require_nonpositive(u, "riemann_from_state");
    const double q = q_of_u(law, u);
    return {v - q, v + q};
}

struct State {
    double u = 0.0;
    double v = 0.0;
};

inline State state_from_riemann(const PressureLaw& law, const RiemannPair& pair)
{
    if (!(pair.r2 >= pair.r1))
        throw DomainError("state_from_riemann: requires r2 >= r1");
    return {u_of_q(law, 0.5 * (pair.r2 - pair.r1)), 0.5 * (pair.r1 + pair.r2)};
}

inline double eigenvalue(const PressureLaw& law, double u, Family fam)
{
    detail::require_nonpositive(u, "eigenvalue");
    return family_sign(fam) * detail::sound_speed(law, u);
}

/// d(lambda_i)/d(r_i) = p''/(4p'); negative, diverging as u -> 0-.
inline double genuine_nonlinearity(const PressureLaw& law, double u)
{
    detail::require_negative(u, "genuine_nonlinearity");
    return eval_ddp(law, u) / (4.0 * eval_dp(law, u));
}

/// Riccati coefficient k(u) < 0 (same for both families).
inline double riccati_k(const PressureLaw& law, double u)
{
    detail::require_negative(u, "riccati_k");
    return -eval_ddp(law, u) / (4.0 * std::pow(-eval_dp(law, u), 1.25));
}

inline double beta_from_gradient(const PressureLaw& law, double u, double r_x)
{
    detail::require_negative(u, "beta_from_gradient");
    return r_x * std::pow(-eval_dp(law, u), 0.25);
}

/// beta0 / (1 + beta0*K) where K is the accumulated int k ds.
inline double riccati_evolve(double beta0, double accumulated_k)
{
    const double denom = 1.0 + beta0 * accumulated_k;
    if (!(denom > 0.0))
        throw BlowUpError("riccati_evolve: 1 + beta0*K = " + std::to_string(denom) + " <= 0");
    return beta0 / denom;
}

} // namespace psys
