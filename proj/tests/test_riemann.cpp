#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "psys/riemann.hpp"

using namespace psys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent oracle: tanh-sinh on the original integrand, whose sqrt
// endpoint singularity at s = 0 tanh-sinh handles natively.
double q_oracle(const PressureLaw& law, double u)
{
    if (u == 0.0)
        return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double s) {
        const double m = -eval_dp(law, s);
        return m > 0.0 ? std::sqrt(m) : 0.0;
    };
    return ts.integrate(f, u, 0.0);
}

const PressureLaw laws[] = {PressureLaw::quadratic(), PressureLaw::quartic(0.1),
                            PressureLaw::quartic(0.05), PressureLaw::quartic(3.0)};

} // namespace

TEST_CASE("q_of_u hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    CHECK(q_of_u(quad, 0.0) == 0.0);
    CHECK_THAT(q_of_u(quad, -1.0), WithinRel(2.0 / 3.0, 1e-14));
    CHECK_THAT(q_of_u(quad, -4.0), WithinRel(16.0 / 3.0, 1e-14));
}

TEST_CASE("q_of_u matches the tanh-sinh oracle", "[riemann]")
{
    for (const auto& law : laws)
        for (double u : {-1e-6, -0.01, -0.5, -1.0, -2.7, -10.0, -50.0}) {
            INFO(describe(law) << " u=" << u);
            CHECK_THAT(q_of_u(law, u), WithinRel(q_oracle(law, u), 1e-10));
        }
}

TEST_CASE("q_of_u rejects the elliptic region", "[riemann]")
{
    CHECK_THROWS_AS(q_of_u(PressureLaw::quadratic(), 0.1), DomainError);
}

TEST_CASE("q is positive, decreasing, with q' = -sqrt(-p')", "[riemann]")
{
    for (const auto& law : laws) {
        double prev = 0.0;
        for (double u = -0.05; u >= -20.0; u -= 0.35) {
            const double q = q_of_u(law, u);
            CHECK(q > prev);
            prev = q;
            const double h = 1e-5;
            const double fd = (q_of_u(law, u + h) - q_of_u(law, u - h)) / (2 * h);
            CHECK_THAT(fd, WithinRel(-std::sqrt(-eval_dp(law, u)), 1e-7));
        }
    }
}

TEST_CASE("u_of_q hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    CHECK(u_of_q(quad, 0.0) == 0.0);
    CHECK_THAT(u_of_q(quad, 2.0 / 3.0), WithinAbs(-1.0, 1e-12));
    CHECK_THAT(u_of_q(quad, 16.0 / 3.0), WithinAbs(-4.0, 1e-12));
    CHECK_THROWS_AS(u_of_q(quad, -1.0), DomainError);
}

TEST_CASE("riemann_from_state hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    auto p = riemann_from_state(quad, 0.0, 3.0);
    CHECK(p.r1 == 3.0);
    CHECK(p.r2 == 3.0);
    p = riemann_from_state(quad, -1.0, 0.5);
    CHECK_THAT(p.r1, WithinAbs(-1.0 / 6.0, 1e-14));
    CHECK_THAT(p.r2, WithinAbs(7.0 / 6.0, 1e-14));
    p = riemann_from_state(quad, -4.0, 0.0);
    CHECK_THAT(p.r1, WithinAbs(-16.0 / 3.0, 1e-14));
    CHECK_THAT(p.r2, WithinAbs(16.0 / 3.0, 1e-14));
}

TEST_CASE("state_from_riemann hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    auto s = state_from_riemann(quad, {3.0, 3.0});
    CHECK(s.u == 0.0);
    CHECK(s.v == 3.0);
    s = state_from_riemann(quad, {-1.0 / 6.0, 7.0 / 6.0});
    CHECK_THAT(s.u, WithinAbs(-1.0, 1e-12));
    CHECK_THAT(s.v, WithinAbs(0.5, 1e-14));
    s = state_from_riemann(quad, {-16.0 / 3.0, 16.0 / 3.0});
    CHECK_THAT(s.u, WithinAbs(-4.0, 1e-12));
    CHECK_THAT(s.v, WithinAbs(0.0, 1e-14));
    CHECK_THROWS_AS(state_from_riemann(quad, {1.0, 0.0}), DomainError);
}

TEST_CASE("state -> invariants -> state round trip", "[riemann][property]")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ud(-50.0, -1e-6), vd(-10.0, 10.0);
    for (const auto& law : laws) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double u = ud(rng), v = vd(rng);
            const auto s = state_from_riemann(law, riemann_from_state(law, u, v));
            worst = std::max({worst, std::abs(s.u - u), std::abs(s.v - v)});
        }
        INFO(describe(law));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("eigenvalue hand values and sign convention", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    CHECK(eigenvalue(quad, 0.0, Family::first) == 0.0);
    CHECK_THAT(eigenvalue(quad, -4.0, Family::first), WithinAbs(2.0, 1e-15));
    CHECK_THAT(eigenvalue(quad, -4.0, Family::second), WithinAbs(-2.0, 1e-15));
}

TEST_CASE("genuine_nonlinearity hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    CHECK_THAT(genuine_nonlinearity(quad, -1.0), WithinAbs(-0.25, 1e-15));
    CHECK_THAT(genuine_nonlinearity(quad, -0.01), WithinRel(-25.0, 1e-13));
    CHECK_THAT(genuine_nonlinearity(quad, -100.0), WithinRel(-0.0025, 1e-13));
    CHECK_THROWS_AS(genuine_nonlinearity(quad, 0.0), DomainError);
}

TEST_CASE("genuine_nonlinearity equals d lambda_i / d r_i", "[riemann][property]")
{
    // Perturb r1 with r2 fixed (and vice versa), map back to u and difference lambda.
    const double h = 1e-6;
    for (const auto& law : laws)
        for (double u : {-0.2, -1.0, -3.0}) {
            const auto p = riemann_from_state(law, u, 0.3);
            const auto lam1 = [&](double r1) {
                return eigenvalue(law, state_from_riemann(law, {r1, p.r2}).u, Family::first);
            };
            const auto lam2 = [&](double r2) {
                return eigenvalue(law, state_from_riemann(law, {p.r1, r2}).u, Family::second);
            };
            const double d1 = (lam1(p.r1 + h) - lam1(p.r1 - h)) / (2 * h);
            const double d2 = (lam2(p.r2 + h) - lam2(p.r2 - h)) / (2 * h);
            INFO(describe(law) << " u=" << u);
            CHECK_THAT(d1, WithinRel(genuine_nonlinearity(law, u), 1e-5));
            CHECK_THAT(d2, WithinRel(genuine_nonlinearity(law, u), 1e-5));
        }
}

TEST_CASE("riccati_k hand values", "[riemann]")
{
    CHECK_THAT(riccati_k(PressureLaw::quadratic(), -1.0), WithinAbs(-0.25, 1e-15));
    CHECK_THAT(riccati_k(PressureLaw::quadratic(), -16.0), WithinRel(-1.0 / 128.0, 1e-14));
    CHECK_THAT(riccati_k(PressureLaw::quartic(0.0), -1.0), WithinAbs(-0.25, 1e-15));
}

TEST_CASE("beta_from_gradient hand values", "[riemann]")
{
    const auto quad = PressureLaw::quadratic();
    CHECK(beta_from_gradient(quad, -1.0, 0.0) == 0.0);
    CHECK_THAT(beta_from_gradient(quad, -1.0, 2.0), WithinAbs(2.0, 1e-15));
    CHECK_THAT(beta_from_gradient(quad, -16.0, 1.0), WithinAbs(2.0, 1e-14));
}

TEST_CASE("riccati_evolve hand values", "[riemann]")
{
    CHECK(riccati_evolve(0.0, -5.0) == 0.0);
    CHECK_THAT(riccati_evolve(1.0, -0.5), WithinAbs(2.0, 1e-15));
    CHECK_THAT(riccati_evolve(-1.0, -0.5), WithinAbs(-2.0 / 3.0, 1e-15));
    CHECK_THROWS_AS(riccati_evolve(1.0, -1.0), BlowUpError);
}

TEST_CASE("riccati_evolve composes like a flow", "[riemann][property]")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> bd(-3.0, 3.0), kd(-0.3, 0.0);
    for (int i = 0; i < 200; ++i) {
        const double b = bd(rng), k1 = kd(rng), k2 = kd(rng);
        if (1.0 + b * (k1 + k2) <= 0.05 || 1.0 + b * k1 <= 0.05)
            continue;
        CHECK_THAT(riccati_evolve(riccati_evolve(b, k1), k2),
                   WithinRel(riccati_evolve(b, k1 + k2), 1e-12));
    }
}

TEST_CASE("riccati_evolve solves beta' = -k beta^2 for constant k", "[riemann]")
{
    // Explicit RK4 on the ODE with k = -0.25 (u = -1, quadratic) as oracle.
    const double k = riccati_k(PressureLaw::quadratic(), -1.0);
    for (double b0 : {-2.0, -0.5, 0.3, 1.0, 1.9}) {
        double b = b0;
        const int steps = 4000;
        const double T = 2.0, h = T / steps;
        auto f = [&](double y) { return -k * y * y; };
        for (int i = 0; i < steps; ++i) {
            const double a1 = f(b), a2 = f(b + 0.5 * h * a1), a3 = f(b + 0.5 * h * a2),
                         a4 = f(b + h * a3);
            b += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
        }
        INFO("beta0=" << b0);
        CHECK_THAT(b, WithinRel(riccati_evolve(b0, k * T), 1e-8));
    }
}
