#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "psys/pressure.hpp"

using namespace psys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("eval_p hand values", "[pressure]")
{
    const auto quad = PressureLaw::quadratic();
    const auto quart = PressureLaw::quartic(0.1);
    CHECK(eval_p(quad, 0.0) == 0.0);
    CHECK(eval_p(quad, -2.0) == 2.0);
    CHECK_THAT(eval_p(quart, 1.0), WithinAbs(0.6, 1e-15));
}

TEST_CASE("eval_dp hand values", "[pressure]")
{
    CHECK(eval_dp(PressureLaw::quadratic(), 0.0) == 0.0);
    CHECK(eval_dp(PressureLaw::quadratic(), -4.0) == -4.0);
    CHECK_THAT(eval_dp(PressureLaw::quartic(0.1), -1.0), WithinAbs(-1.4, 1e-15));
}

TEST_CASE("eval_ddp hand values", "[pressure]")
{
    for (double u : {-7.0, -1.0, 0.0, 0.3, 12.0})
        CHECK(eval_ddp(PressureLaw::quadratic(), u) == 1.0);
    CHECK(eval_ddp(PressureLaw::quartic(0.0), -3.0) == 1.0);
    CHECK_THAT(eval_ddp(PressureLaw::quartic(0.1), 1.0), WithinAbs(2.2, 1e-15));
}

TEST_CASE("quartic rejects negative coefficient", "[pressure]")
{
    CHECK_THROWS_AS(PressureLaw::quartic(-0.1), DomainError);
}

TEST_CASE("derivatives agree with central differences", "[pressure]")
{
    const double h = 1e-5;
    for (const auto& law : {PressureLaw::quadratic(), PressureLaw::quartic(0.1), PressureLaw::quartic(2.0)}) {
        for (double u = -5.0; u <= 5.0; u += 0.37) {
            const double fd1 = (eval_p(law, u + h) - eval_p(law, u - h)) / (2 * h);
            const double fd2 = (eval_dp(law, u + h) - eval_dp(law, u - h)) / (2 * h);
            CHECK_THAT(eval_dp(law, u), WithinRel(fd1, 1e-8) || WithinAbs(fd1, 1e-8));
            CHECK_THAT(eval_ddp(law, u), WithinRel(fd2, 1e-8) || WithinAbs(fd2, 1e-8));
        }
    }
}

TEST_CASE("quadratic-like structure holds on a range", "[pressure]")
{
    for (const auto& law : {PressureLaw::quadratic(), PressureLaw::quartic(0.1)}) {
        CHECK(eval_p(law, 0.0) == 0.0);
        CHECK(eval_dp(law, 0.0) == 0.0);
        for (double u = -20.0; u <= 20.0; u += 0.5) {
            CHECK(eval_ddp(law, u) > 0.0);
            CHECK(eval_p(law, u) >= 0.0);
            // hyperbolic exactly on u < 0
            if (u < 0.0)
                CHECK(eval_dp(law, u) < 0.0);
            if (u > 0.0)
                CHECK(eval_dp(law, u) > 0.0);
        }
    }
}

TEST_CASE("validate_law accepts the built-in laws", "[pressure]")
{
    const auto r1 = validate_law(PressureLaw::quadratic(), -10.0, 10.0, 1001);
    CHECK(r1.ok());
    CHECK(r1.violations.empty());
    const auto r2 = validate_law(PressureLaw::quartic(0.1), -10.0, 10.0, 1001);
    CHECK(r2.ok());
}

TEST_CASE("validate_law flags a non-convex law", "[pressure]")
{
    // p = u^2/2 - u^4/40: p'' = 1 - 0.3u^2 < 0 for |u| > 1.826
    auto p = [](double u) { return 0.5 * u * u - u * u * u * u / 40.0; };
    auto dp = [](double u) { return u - u * u * u / 10.0; };
    auto ddp = [](double u) { return 1.0 - 0.3 * u * u; };
    const auto r = validate_law(p, dp, ddp, -10.0, 10.0, 1001);
    REQUIRE_FALSE(r.ok());
    bool nonconvex = false;
    for (const auto& v : r.violations)
        nonconvex = nonconvex || v.kind == LawViolation::Kind::nonconvex;
    CHECK(nonconvex);
}

TEST_CASE("validate_law flags a shifted minimum", "[pressure]")
{
    auto p = [](double u) { return 0.5 * u * u + 1.0; };
    auto dp = [](double u) { return u; };
    auto ddp = [](double) { return 1.0; };
    const auto r = validate_law(p, dp, ddp, -1.0, 1.0, 101);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().kind == LawViolation::Kind::nonzero_minimum);
}

TEST_CASE("validate_law argument checks", "[pressure]")
{
    CHECK_THROWS_AS(validate_law(PressureLaw::quadratic(), 1.0, -1.0, 11), DomainError);
    CHECK_THROWS_AS(validate_law(PressureLaw::quadratic(), -1.0, 1.0, 1), DomainError);
}

TEST_CASE("describe names the law", "[pressure]")
{
    CHECK(describe(PressureLaw::quadratic()) == "quadratic");
    CHECK(describe(PressureLaw::quartic(0.25)).rfind("quartic(a=0.25", 0) == 0);
}
