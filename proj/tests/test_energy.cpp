#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "psys/energy.hpp"

using namespace psys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

double quad01(const std::function<double(double)>& f)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

StateField field(std::size_t n, const std::function<double(double)>& u,
                 const std::function<double(double)>& v)
{
    const PeriodicGrid g(n);
    return {g, g.sample(u), g.sample(v)};
}

} // namespace

TEST_CASE("gauges are concave, positive and vanish at 0", "[energy]")
{
    for (auto kind : {GaugeKind::log1p, GaugeKind::rational}) {
        const ConcaveGauge f{kind};
        CHECK(f.f(0.0) == 0.0);
        for (double u = 0.05; u < 20.0; u *= 1.7) {
            CHECK(f.f(u) > 0.0);
            CHECK(f.ddf(u) < 0.0);
            const double h = 1e-5;
            CHECK_THAT(f.df(u), WithinRel((f.f(u + h) - f.f(u - h)) / (2 * h), 1e-7));
            CHECK_THAT(f.ddf(u), WithinRel((f.df(u + h) - f.df(u - h)) / (2 * h), 1e-7));
        }
    }
}

TEST_CASE("energy of simple fields", "[energy]")
{
    const PeriodicGrid g(64);
    const ConcaveGauge f{GaugeKind::log1p};
    CHECK(energy(StateField::constant(g, 0.0, 0.0), f) == 0.0);
    CHECK_THAT(energy(StateField::constant(g, 1.0, 0.0), f), WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("energy matches a quadrature oracle", "[energy]")
{
    auto u = [](double x) { return 1.0 + 0.5 * std::sin(two_pi * x); };
    const auto s = field(256, u, [](double) { return 0.0; });
    const double oracle = quad01([&](double x) { return std::log1p(u(x)); });
    CHECK_THAT(energy(s, ConcaveGauge{GaugeKind::log1p}), WithinAbs(oracle, 1e-10));
}

TEST_CASE("second derivative vanishes for constant fields", "[energy]")
{
    const PeriodicGrid g(64);
    const auto s = StateField::constant(g, 0.7, -3.0);
    const auto law = PressureLaw::quadratic();
    const ConcaveGauge f{};
    CHECK(std::abs(energy_ddot_formula(law, s, f)) < 1e-14);
    CHECK(std::abs(energy_ddot_direct(law, s, f)) < 1e-14);
}

TEST_CASE("analytic case u = 1, v = sin(2 pi x)", "[energy]")
{
    const auto s = field(256, [](double) { return 1.0; }, [](double x) { return std::sin(two_pi * x); });
    const auto law = PressureLaw::quadratic();
    const ConcaveGauge f{GaugeKind::log1p};
    const double expect = -pi * pi / 2.0;
    CHECK_THAT(energy_ddot_formula(law, s, f), WithinAbs(expect, 1e-8));
    CHECK_THAT(energy_ddot_direct(law, s, f), WithinAbs(expect, 1e-8));
}

TEST_CASE("formula matches quadrature for u = 1 + 0.5 sin, v = 0", "[energy]")
{
    auto u = [](double x) { return 1.0 + 0.5 * std::sin(two_pi * x); };
    auto ux = [](double x) { return 0.5 * two_pi * std::cos(two_pi * x); };
    const auto s = field(256, u, [](double) { return 0.0; });
    for (const auto& law : {PressureLaw::quadratic(), PressureLaw::quartic(0.1)}) {
        const ConcaveGauge f{GaugeKind::log1p};
        const double oracle =
            quad01([&](double x) { return f.ddf(u(x)) * eval_dp(law, u(x)) * ux(x) * ux(x); });
        const double formula = energy_ddot_formula(law, s, f);
        CHECK(formula <= 0.0);
        CHECK_THAT(formula, WithinAbs(oracle, 1e-8));
        CHECK_THAT(energy_ddot_direct(law, s, f), WithinAbs(oracle, 1e-8));
    }
}

TEST_CASE("identity gap is tiny for mixed u and v", "[energy]")
{
    auto u = [](double x) { return 0.6 + 0.25 * std::cos(two_pi * x) + 0.1 * std::sin(3 * two_pi * x); };
    auto v = [](double x) { return std::sin(2 * two_pi * x) - 0.4 * std::cos(two_pi * x); };
    const auto s = field(256, u, v);
    for (auto kind : {GaugeKind::log1p, GaugeKind::rational}) {
        const auto d = energy_diagnostics(PressureLaw::quartic(0.2), s, ConcaveGauge{kind});
        CHECK(d.identity_gap < 1e-8);
        CHECK(d.ddot_formula <= 1e-10);
        CHECK(d.energy > 0.0);
    }
}

TEST_CASE("energy operations refuse hyperbolic points", "[energy]")
{
    const auto s = field(64, [](double x) { return x < 0.5 ? 1.0 : -0.5; }, [](double) { return 0.0; });
    const ConcaveGauge f{};
    CHECK_THROWS_AS(energy(s, f), DomainError);
    CHECK_THROWS_AS(energy_ddot_formula(PressureLaw::quadratic(), s, f), DomainError);
    CHECK_THROWS_AS(energy_ddot_direct(PressureLaw::quadratic(), s, f), DomainError);
}
