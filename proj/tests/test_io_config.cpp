#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "psys/config.hpp"
#include "psys/io.hpp"

using namespace psys;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const char* minimal = "# constant state\n"
                      "law = quadratic\n"
                      "n = 256\n"
                      "preset = constant\n"
                      "u0 = -1\n";

std::string config_error(std::string_view text, const std::vector<std::string>& ov = {})
{
    try {
        parse_config_text(text, "t.cfg", ov);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("minimal config parses with defaults", "[config]")
{
    const auto c = parse_config_text(minimal, "t.cfg");
    CHECK(c.law.kind == LawKind::quadratic);
    CHECK(c.n == 256);
    CHECK(c.preset == Preset::constant);
    CHECK(std::get<ConstantData>(c.data).u0 == -1.0);
    CHECK(c.solver.t_max == 10.0);
    CHECK(c.solver.cfl_safety == 0.4);
    CHECK(c.scenarios == suite_scenario_ids());
    CHECK(c.warnings.empty());
    CHECK(c.effective.at("u0") == "-1");
}

TEST_CASE("config errors name the key and the line", "[config]")
{
    const auto e1 = config_error("n = 100\n");
    CHECK_THAT(e1, ContainsSubstring("'n'") && ContainsSubstring("t.cfg:1"));
    const auto e2 = config_error("law = quadratic\nfoo = 1\n");
    CHECK_THAT(e2, ContainsSubstring("unknown key 'foo'") && ContainsSubstring("t.cfg:2"));
    CHECK_THAT(config_error("law = cubic\n"), ContainsSubstring("'law'"));
    CHECK_THAT(config_error("law = quartic\nquartic_a = -1\n"), ContainsSubstring("quartic_a"));
    CHECK_THAT(config_error("t_max = abc\n"), ContainsSubstring("t_max"));
    CHECK_THAT(config_error("filter = maybe\n"), ContainsSubstring("filter"));
    CHECK_THAT(config_error("scenarios = constant, bogus\n"), ContainsSubstring("bogus"));
    CHECK_THAT(config_error("n = 2\n"), ContainsSubstring("'n'"));
    CHECK_THAT(config_error("just text\n"), ContainsSubstring("key = value"));
}

TEST_CASE("quoted values and trailing comments", "[config]")
{
    const auto c = parse_config_text("out_dir = \"a # b\"  # comment\nt_max = 3 # comment\n", "t.cfg");
    CHECK(c.out_dir == "a # b");
    CHECK(c.solver.t_max == 3.0);
    CHECK_THAT(config_error("out_dir = \"open\n"), ContainsSubstring("unterminated"));
}

TEST_CASE("overrides win over the file and are named in errors", "[config]")
{
    const auto c = parse_config_text(minimal, "t.cfg", {"n=512", "u0 = -2.5"});
    CHECK(c.n == 512);
    CHECK(std::get<ConstantData>(c.data).u0 == -2.5);
    CHECK_THAT(config_error(minimal, {"n=7"}), ContainsSubstring("override 1 'n=7'"));
}

TEST_CASE("keys foreign to the preset warn", "[config]")
{
    const auto c = parse_config_text("preset = constant\namplitude = 0.2\n", "t.cfg");
    REQUIRE(c.warnings.size() == 1);
    CHECK_THAT(c.warnings[0], ContainsSubstring("amplitude"));
}

TEST_CASE("presets read their parameters", "[config]")
{
    const auto sw = parse_config_text("preset = simple_wave\namplitude = 0.2\nmode = 3\n", "t.cfg");
    const auto& d = std::get<SimpleWaveData>(sw.data);
    CHECK(d.amplitude == 0.2);
    CHECK(d.mode == 3);
    CHECK(d.u_center == -1.0);
    const auto rt = parse_config_text("preset = random_trig\nseed = 9\n", "t.cfg");
    CHECK(std::get<RandomTrigData>(rt.data).seed == 9);
    CHECK_THAT(config_error("preset = csv\n"), ContainsSubstring("field_csv"));
}

TEST_CASE("config hash is stable and ignores out_dir", "[config]")
{
    const auto a = parse_config_text(minimal, "a.cfg");
    const auto b = parse_config_text(std::string(minimal) + "out_dir = elsewhere\n", "b.cfg");
    const auto c = parse_config_text(minimal, "a.cfg", {"t_max=5"});
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
    // formatting of equivalent numbers does not matter for defaults
    CHECK(a.hash() == parse_config_text(minimal, "a.cfg").hash());
}

TEST_CASE("FNV-1a reference values", "[io]")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("CSV header and snapshot round trip", "[io]")
{
    const PeriodicGrid g(16);
    const StateField s(g, g.sample([](double x) { return -1.0 + 0.1 * x * x; }),
                       g.sample([](double x) { return std::exp(x) / 3.0; }));
    std::stringstream ss;
    write_field_csv(ss, 0.25, s, "0123456789abcdef");
    std::string first;
    std::getline(ss, first);
    CHECK(first == "# psys 0.1.0 config_hash=0123456789abcdef");
    ss.seekg(0);
    const auto back = read_snapshot_csv(ss);
    CHECK(back.t == 0.25);
    CHECK(std::ranges::equal(back.state.u(), s.u()));
    CHECK(std::ranges::equal(back.state.v(), s.v()));
}

TEST_CASE("snapshot reader stops at the second time and rejects bad input", "[io]")
{
    std::stringstream two;
    two << "t,x,u,v\n";
    for (double t : {0.0, 1.0})
        for (int j = 0; j < 16; ++j)
            two << t << ',' << j / 16.0 << ",-1," << t << '\n';
    const auto f = read_snapshot_csv(two);
    CHECK(f.t == 0.0);
    CHECK(f.state.grid().n() == 16);

    std::stringstream nohead("0,0,-1,0\n");
    CHECK_THROWS_AS(read_snapshot_csv(nohead), ConfigError);
    std::stringstream badnum("t,x,u,v\n0,0,zz,0\n");
    CHECK_THROWS_AS(read_snapshot_csv(badnum), ConfigError);
    std::stringstream odd("t,x,u,v\n0,0,-1,0\n0,0.5,-1,0\n0,0.7,-1,0\n");
    CHECK_THROWS_AS(read_snapshot_csv(odd), ConfigError);
}

TEST_CASE("JSON reports", "[io]")
{
    ScenarioReport r{"demo", PressureLaw::quadratic(), 3};
    r.metrics["x"] = 1.5;
    r.metrics["y"] = std::numeric_limits<double>::infinity();
    r.thresholds["x"] = 2.0;
    r.verdict = Verdict::pass;
    const auto j = to_json(r);
    CHECK(j["scenario_id"] == "demo");
    CHECK(j["seed"] == 3);
    CHECK(j["verdict"] == "pass");
    CHECK(j["metrics"]["x"] == 1.5);
    CHECK(j["metrics"]["y"].is_null());
    CHECK_FALSE(j.contains("reason"));
    const std::string text = dump(j);
    CHECK(text.back() == '\n');
    CHECK(ojson::parse(text) == j);

    const auto e = to_json(EnergyDiagnostics{0.5, -1.0, -1.0, 0.0});
    CHECK(e["E"] == 0.5);
    CHECK(e.contains("identity_gap"));
    CHECK(generator_json("h")["tool"] == "psys");
}
