#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "psys/initial_data.hpp"

using namespace psys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("constant preset", "[initial_data]")
{
    const PeriodicGrid g(32);
    const auto s = realize(PressureLaw::quadratic(), g, ConstantData{-2.0, 0.75});
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(s.u()[j] == -2.0);
        CHECK(s.v()[j] == 0.75);
    }
}

TEST_CASE("simple-wave preset keeps r2 constant", "[initial_data]")
{
    const PeriodicGrid g(128);
    for (const auto& law : {PressureLaw::quadratic(), PressureLaw::quartic(0.05)}) {
        const SimpleWaveData d{-1.0, 0.3, 2, 0.4};
        const auto s = realize(law, g, d);
        double spread_r1 = 0.0;
        const double r1_first = riemann_from_state(law, s.u()[0], s.v()[0]).r1;
        for (std::size_t j = 0; j < g.n(); ++j) {
            CHECK_THAT(s.u()[j], WithinAbs(-1.0 + 0.3 * std::sin(2 * two_pi * g.node(j)), 1e-15));
            const auto p = riemann_from_state(law, s.u()[j], s.v()[j]);
            CHECK_THAT(p.r2, WithinAbs(0.4, 1e-14));
            spread_r1 = std::max(spread_r1, std::abs(p.r1 - r1_first));
        }
        CHECK(spread_r1 > 0.1);
    }
}

TEST_CASE("simple-wave preset refuses data touching u = 0", "[initial_data]")
{
    const PeriodicGrid g(32);
    CHECK_THROWS_AS(realize(PressureLaw::quadratic(), g, SimpleWaveData{-0.3, 0.3, 1, 0.0}),
                    DomainError);
}

TEST_CASE("random_trig is deterministic per seed and capped", "[initial_data]")
{
    const auto law = PressureLaw::quadratic();
    const PeriodicGrid g(256);
    const RandomTrigData d{11, 4, 0.3, -1.0};
    const auto a = realize(law, g, d);
    const auto b = realize(law, g, d);
    CHECK(std::ranges::equal(a.u(), b.u()));
    CHECK(std::ranges::equal(a.v(), b.v()));
    auto d2 = d;
    d2.seed = 12;
    CHECK_FALSE(std::ranges::equal(realize(law, g, d2).u(), a.u()));

    // amplitude 0.3 around -1: peak |u + 1| is exactly 0.3
    double peak = 0.0;
    for (double u : a.u())
        peak = std::max(peak, std::abs(u + 1.0));
    CHECK_THAT(peak, WithinAbs(0.3, 1e-14));

    // large amplitude gets capped at max u <= -0.05
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = realize(law, g, RandomTrigData{seed, 6, 5.0, -0.5});
        double mx = -1e300;
        for (double u : s.u())
            mx = std::max(mx, u);
        CHECK(mx <= random_trig_ceiling + 1e-15);
    }
    CHECK_THAT(effective_amplitude({0, 4, 5.0, -0.5}), WithinAbs(0.45, 1e-15));
    CHECK_THROWS_AS(realize(law, g, RandomTrigData{0, 4, 0.1, 0.0}), DomainError);
    CHECK_THROWS_AS(realize(law, g, RandomTrigData{0, 128, 0.1, -1.0}), DomainError);
}

TEST_CASE("random_trig is band limited", "[initial_data]")
{
    const PeriodicGrid g(128);
    const auto s = realize(PressureLaw::quadratic(), g, RandomTrigData{3, 4, 0.3, -1.0});
    const auto spec = spectrum(g, s.u());
    for (std::size_t k = 5; k <= g.n() / 2; ++k)
        CHECK(std::abs(spec[k]) < 1e-12);
}

TEST_CASE("sine preset", "[initial_data]")
{
    const PeriodicGrid g(64);
    const auto s = realize(PressureLaw::quadratic(), g, SineData{1.0, 0.5, 1, 0.2, 1.0});
    for (std::size_t j = 0; j < 64; ++j) {
        const double x = g.node(j);
        CHECK_THAT(s.u()[j], WithinAbs(1.0 + 0.5 * std::sin(two_pi * x), 1e-15));
        CHECK_THAT(s.v()[j], WithinAbs(0.2 + std::sin(two_pi * x), 1e-15));
    }
}

TEST_CASE("Burgers crossing time of the reference simple wave", "[initial_data]")
{
    const auto law = PressureLaw::quadratic();
    const SimpleWaveData d{-1.0, 0.3, 1, 0.0};
    // Oracle: Brent minimization of d(lambda_1)/dx = -u_x / (2 sqrt(-u)).
    auto slope = [](double x) {
        const double u = -1.0 + 0.3 * std::sin(two_pi * x);
        return -0.3 * two_pi * std::cos(two_pi * x) / (2.0 * std::sqrt(-u));
    };
    const auto [xm, smin] = boost::math::tools::brent_find_minima(slope, -0.25, 0.25, 50);
    const double oracle = -1.0 / smin;
    const auto t = simple_wave_burgers_time(law, d);
    REQUIRE(t);
    CHECK_THAT(*t, WithinRel(oracle, 1e-8));
    CHECK_THAT(*t, WithinAbs(1.0487437795, 1e-8));
    // shifted start time
    CHECK_THAT(*simple_wave_burgers_time(law, d, 2.0), WithinAbs(2.0 + *t, 1e-12));
    // flat data: no crossing
    CHECK_FALSE(simple_wave_burgers_time(law, SimpleWaveData{-1.0, 0.0, 1, 0.0}));
}
