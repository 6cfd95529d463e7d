#pragma once

// Flat `key = value` run configuration. A file is read first, then
// `key=value` overrides are applied on top. Every key must be known; unknown
// keys and malformed values raise ConfigError naming the key and its origin
// (file:line or the override).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "psys/characteristics.hpp"
#include "psys/energy.hpp"
#include "psys/errors.hpp"
#include "psys/initial_data.hpp"
#include "psys/io.hpp"
#include "psys/pressure.hpp"
#include "psys/solver.hpp"
#include "psys/verify.hpp"

namespace psys {

enum class Preset { constant, simple_wave, random_trig, sine, csv };

inline const char* to_string(Preset p)
{
    switch (p) {
    case Preset::constant: return "constant";
    case Preset::simple_wave: return "simple_wave";
    case Preset::random_trig: return "random_trig";
    case Preset::sine: return "sine";
    case Preset::csv: return "csv";
    }
    return "?";
}

/// Which characteristic families `trace`/`predict` follow.
enum class FamilySelection { first, second, both };

struct RunConfig {
    PressureLaw law = PressureLaw::quadratic();
    std::size_t n = 256;
    Preset preset = Preset::constant;
    InitialData data = ConstantData{};
    std::string field_csv;
    double t0 = 0.0;
    SolverConfig solver{};
    std::string out_dir = "out";

    // trace / predict
    std::size_t seeds = 16;
    FamilySelection families = FamilySelection::both;
    double horizon = 0.0;
    ClassifyOptions classify{};
    Extrapolation extrapolate = Extrapolation::final_slope;

    // energy
    GaugeKind gauge = GaugeKind::log1p;

    // validate-law
    double law_u_min = -10.0;
    double law_u_max = 10.0;
    std::size_t law_samples = 2001;

    // verify
    std::vector<std::string> scenarios;
    SuiteOptions suite{};

    /// Effective key = value pairs (defaults included), sorted by key.
    std::map<std::string, std::string> effective;
    std::vector<std::string> warnings;

    /// Canonical text of the effective configuration. out_dir is left out so
    /// the same run written to two places hashes the same.
    std::string canonical() const
    {
        std::string s;
        for (const auto& [k, v] : effective)
            if (k != "out_dir")
                s += k + " = " + v + "\n";
        return s;
    }

    std::string hash() const { return hex64(fnv1a64(canonical())); }
};

namespace detail {

struct ConfigEntry {
    std::string value;
    std::string origin;
};

using ConfigEntries = std::map<std::string, ConfigEntry>;

struct KeySpec {
    const char* key;
    const char* fallback; ///< nullptr: default depends on the preset
};

// clang-format off
inline const std::vector<KeySpec>& key_specs()
{
    static const std::vector<KeySpec> specs{
        {"law", "quadratic"}, {"quartic_a", "0"}, {"n", "256"}, {"preset", "constant"},
        // preset parameters
        {"u0", nullptr}, {"v0", nullptr}, {"u_center", nullptr}, {"amplitude", nullptr},
        {"mode", nullptr}, {"r2_const", nullptr}, {"seed", nullptr}, {"modes", nullptr},
        {"u_offset", nullptr}, {"v_amplitude", nullptr}, {"field_csv", nullptr},
        // solver
        {"t0", "0"}, {"t_max", "10"}, {"cfl_safety", "0.4"}, {"grad_blowup_factor", "50"},
        {"tail_ratio_max", "0.0001"}, {"hyperbolicity_eps", "0.001"}, {"snapshot_stride", "1"},
        {"fixed_dt", "0"}, {"filter", "true"}, {"backward", "false"},
        {"out_dir", "out"},
        // trace / predict
        {"seeds", "16"}, {"family", "both"}, {"horizon", "0"}, {"growth_factor", "10"},
        {"eps_b", "0.001"}, {"extrapolate", "final_slope"},
        // energy
        {"gauge", "log1p"},
        // validate-law
        {"u_min", "-10"}, {"u_max", "10"}, {"n_samples", "2001"},
        // verify
        {"scenarios", "all"}, {"sweep_seeds", "20"}, {"quartic_sweep_seeds", "10"},
        {"backward_sweep_seeds", "5"}, {"sweep_t_max", "50"}, {"energy_fields", "50"},
        {"energy_seed", "42"},
    };
    return specs;
}
// clang-format on

inline bool known_key(std::string_view k)
{
    const auto& s = key_specs();
    return std::any_of(s.begin(), s.end(), [&](const KeySpec& ks) { return k == ks.key; });
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Parses one `key = value` assignment. Values may be double-quoted; an
/// unquoted value ends at the first '#'.
inline std::pair<std::string, std::string> split_assignment(std::string_view line,
                                                            const std::string& origin)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError(origin + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string rest = trim(line.substr(eq + 1));
    std::string value;
    if (!rest.empty() && rest.front() == '"') {
        const auto close = rest.find('"', 1);
        if (close == std::string::npos)
            throw ConfigError(origin + ": unterminated quote in value of '" + key + "'");
        value = rest.substr(1, close - 1);
        const std::string tail = trim(std::string_view(rest).substr(close + 1));
        if (!tail.empty() && tail.front() != '#')
            throw ConfigError(origin + ": trailing text after quoted value of '" + key + "'");
    } else {
        value = trim(std::string_view(rest).substr(0, rest.find('#')));
    }
    if (key.empty())
        throw ConfigError(origin + ": empty key");
    if (!known_key(key))
        throw ConfigError(origin + ": unknown key '" + key + "'");
    return {key, value};
}

inline void read_entries(std::string_view text, const std::string& source, ConfigEntries& out)
{
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const std::string origin = source + ":" + std::to_string(lineno);
        auto [k, v] = split_assignment(t, origin);
        out[k] = {v, origin};
    }
}

/// Shortest text that reads back to the same double.
inline std::string shortest(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

class Reader {
public:
    explicit Reader(const ConfigEntries& e) : entries_(e) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string origin(const std::string& key) const
    {
        const auto it = entries_.find(key);
        return it == entries_.end() ? std::string("default") : it->second.origin;
    }

    std::string raw(const std::string& key, const std::string& fallback)
    {
        const auto it = entries_.find(key);
        const std::string v = it == entries_.end() ? fallback : it->second.value;
        used_[key] = v;
        return v;
    }

    std::string str(const std::string& key)
    {
        return raw(key, fallback_of(key));
    }

    double real(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        const std::string s = fallback ? raw(key, shortest(*fallback)) : str(key);
        try {
            std::size_t used = 0;
            const double x = std::stod(s, &used);
            if (used == s.size() && std::isfinite(x))
                return x;
        } catch (const std::exception&) {
        }
        throw bad(key, s, "a finite number");
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt)
    {
        const std::string s = fallback ? raw(key, std::to_string(*fallback)) : str(key);
        try {
            std::size_t used = 0;
            const long long x = std::stoll(s, &used);
            if (used == s.size())
                return x;
        } catch (const std::exception&) {
        }
        throw bad(key, s, "an integer");
    }

    std::size_t count(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt)
    {
        const auto x = integer(key, fallback);
        if (x < 0)
            throw bad(key, std::to_string(x), "a non-negative integer");
        return static_cast<std::size_t>(x);
    }

    bool boolean(const std::string& key)
    {
        const std::string s = str(key);
        if (s == "true" || s == "1" || s == "yes")
            return true;
        if (s == "false" || s == "0" || s == "no")
            return false;
        throw bad(key, s, "true or false");
    }

    ConfigError bad(const std::string& key, const std::string& value, const std::string& expected) const
    {
        return ConfigError(origin(key) + ": key '" + key + "' = '" + value + "': expected " + expected);
    }

    const std::map<std::string, std::string>& used() const { return used_; }

private:
    static std::string fallback_of(const std::string& key)
    {
        for (const auto& ks : key_specs())
            if (key == ks.key && ks.fallback)
                return ks.fallback;
        return {};
    }

    const ConfigEntries& entries_;
    std::map<std::string, std::string> used_;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace detail

/// Builds a validated RunConfig from already-collected entries.
inline RunConfig build_run_config(const detail::ConfigEntries& entries)
{
    detail::Reader rd(entries);
    RunConfig c;

    const std::string law = rd.str("law");
    if (law == "quadratic") {
        c.law = PressureLaw::quadratic();
    } else if (law == "quartic") {
        const double a = rd.real("quartic_a");
        if (a < 0.0)
            throw rd.bad("quartic_a", fmt17(a), "a >= 0");
        c.law = PressureLaw::quartic(a);
    } else {
        throw rd.bad("law", law, "quadratic or quartic");
    }

    c.n = rd.count("n");
    if (!detail::is_power_of_two(c.n) || c.n < 16 || c.n > 4096)
        throw rd.bad("n", std::to_string(c.n), "a power of two in [16, 4096]");

    const std::string preset = rd.str("preset");
    std::set<std::string> preset_keys;
    if (preset == "constant") {
        c.preset = Preset::constant;
        ConstantData d;
        d.u0 = rd.real("u0", d.u0);
        d.v0 = rd.real("v0", d.v0);
        c.data = d;
        preset_keys = {"u0", "v0"};
    } else if (preset == "simple_wave") {
        c.preset = Preset::simple_wave;
        SimpleWaveData d;
        d.u_center = rd.real("u_center", d.u_center);
        d.amplitude = rd.real("amplitude", d.amplitude);
        d.mode = static_cast<int>(rd.integer("mode", d.mode));
        d.r2_const = rd.real("r2_const", d.r2_const);
        if (d.mode < 1)
            throw rd.bad("mode", std::to_string(d.mode), "mode >= 1");
        if (static_cast<std::size_t>(d.mode) >= c.n / 2)
            throw rd.bad("mode", std::to_string(d.mode), "mode < n/2");
        c.data = d;
        preset_keys = {"u_center", "amplitude", "mode", "r2_const"};
    } else if (preset == "random_trig") {
        c.preset = Preset::random_trig;
        RandomTrigData d;
        d.seed = static_cast<std::uint64_t>(rd.integer("seed", 0));
        d.modes = static_cast<int>(rd.integer("modes", d.modes));
        d.amplitude = rd.real("amplitude", d.amplitude);
        d.u_offset = rd.real("u_offset", d.u_offset);
        if (d.modes < 1 || static_cast<std::size_t>(d.modes) >= c.n / 2)
            throw rd.bad("modes", std::to_string(d.modes), "1 <= modes < n/2");
        c.data = d;
        preset_keys = {"seed", "modes", "amplitude", "u_offset"};
    } else if (preset == "sine") {
        c.preset = Preset::sine;
        SineData d;
        d.u_center = rd.real("u_center", d.u_center);
        d.amplitude = rd.real("amplitude", d.amplitude);
        d.mode = static_cast<int>(rd.integer("mode", d.mode));
        d.v0 = rd.real("v0", d.v0);
        d.v_amplitude = rd.real("v_amplitude", d.v_amplitude);
        if (d.mode < 1 || static_cast<std::size_t>(d.mode) >= c.n / 2)
            throw rd.bad("mode", std::to_string(d.mode), "1 <= mode < n/2");
        c.data = d;
        preset_keys = {"u_center", "amplitude", "mode", "v0", "v_amplitude"};
    } else if (preset == "csv") {
        c.preset = Preset::csv;
        c.field_csv = rd.raw("field_csv", "");
        if (c.field_csv.empty())
            throw rd.bad("field_csv", "", "a path (preset = csv)");
        preset_keys = {"field_csv"};
    } else {
        throw rd.bad("preset", preset, "constant, simple_wave, random_trig, sine or csv");
    }
    for (const char* k : {"u0", "v0", "u_center", "amplitude", "mode", "r2_const", "seed", "modes",
                          "u_offset", "v_amplitude", "field_csv"})
        if (rd.has(k) && !preset_keys.count(k))
            c.warnings.push_back(rd.origin(k) + ": key '" + k + "' is ignored by preset '" +
                                 preset + "'");

    c.t0 = rd.real("t0");
    c.solver.t_max = rd.real("t_max");
    c.solver.cfl_safety = rd.real("cfl_safety");
    c.solver.grad_blowup_factor = rd.real("grad_blowup_factor");
    c.solver.tail_ratio_max = rd.real("tail_ratio_max");
    c.solver.hyperbolicity_eps = rd.real("hyperbolicity_eps");
    c.solver.snapshot_stride = rd.count("snapshot_stride");
    c.solver.fixed_dt = rd.real("fixed_dt");
    c.solver.filter = rd.boolean("filter");
    c.solver.backward = rd.boolean("backward");
    // Only t_max depends on t0 for the csv preset, whose start time comes
    // from the file; that case is validated again once the file is read.
    try {
        const double t_ref = c.preset == Preset::csv ? c.solver.t_max - 1.0 : c.t0;
        for (auto& w : validate(c.solver, t_ref))
            c.warnings.push_back(w);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("solver settings: ") + e.what());
    }

    c.out_dir = rd.str("out_dir");
    if (c.out_dir.empty())
        throw rd.bad("out_dir", "", "a directory path");

    c.seeds = rd.count("seeds");
    if (c.seeds == 0)
        throw rd.bad("seeds", "0", "at least one seed");
    const std::string fam = rd.str("family");
    if (fam == "first")
        c.families = FamilySelection::first;
    else if (fam == "second")
        c.families = FamilySelection::second;
    else if (fam == "both")
        c.families = FamilySelection::both;
    else
        throw rd.bad("family", fam, "first, second or both");
    c.horizon = rd.real("horizon");
    if (c.horizon < 0.0)
        throw rd.bad("horizon", fmt17(c.horizon), "horizon >= 0 (0 = whole run)");
    c.classify.growth_factor = rd.real("growth_factor");
    if (!(c.classify.growth_factor > 1.0))
        throw rd.bad("growth_factor", fmt17(c.classify.growth_factor), "a value > 1");
    c.classify.eps_b = rd.real("eps_b");
    if (!(c.classify.eps_b > 0.0))
        throw rd.bad("eps_b", fmt17(c.classify.eps_b), "a positive value");
    const std::string ex = rd.str("extrapolate");
    if (ex == "none")
        c.extrapolate = Extrapolation::none;
    else if (ex == "final_slope")
        c.extrapolate = Extrapolation::final_slope;
    else
        throw rd.bad("extrapolate", ex, "none or final_slope");

    const std::string gauge = rd.str("gauge");
    if (gauge == "log1p")
        c.gauge = GaugeKind::log1p;
    else if (gauge == "rational")
        c.gauge = GaugeKind::rational;
    else
        throw rd.bad("gauge", gauge, "log1p or rational");

    c.law_u_min = rd.real("u_min");
    c.law_u_max = rd.real("u_max");
    if (!(c.law_u_min < c.law_u_max))
        throw rd.bad("u_max", fmt17(c.law_u_max), "u_max > u_min");
    c.law_samples = rd.count("n_samples");
    if (c.law_samples < 3)
        throw rd.bad("n_samples", std::to_string(c.law_samples), "at least 3");

    const std::string sc = rd.str("scenarios");
    const auto& ids = suite_scenario_ids();
    if (sc == "all") {
        c.scenarios = ids;
    } else {
        std::stringstream ss(sc);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty())
                continue;
            if (std::find(ids.begin(), ids.end(), item) == ids.end())
                throw rd.bad("scenarios", item, "'all' or a comma list of known scenario ids");
            c.scenarios.push_back(item);
        }
        if (c.scenarios.empty())
            throw rd.bad("scenarios", sc, "at least one scenario id");
    }
    c.suite.sweep_seeds = rd.count("sweep_seeds");
    c.suite.quartic_sweep_seeds = rd.count("quartic_sweep_seeds");
    c.suite.backward_sweep_seeds = rd.count("backward_sweep_seeds");
    c.suite.sweep_t_max = rd.real("sweep_t_max");
    if (!(c.suite.sweep_t_max > 0.0))
        throw rd.bad("sweep_t_max", fmt17(c.suite.sweep_t_max), "a positive time");
    c.suite.energy_fields = rd.count("energy_fields");
    c.suite.energy_seed = static_cast<std::uint64_t>(rd.integer("energy_seed"));

    c.effective = rd.used();
    return c;
}

/// Parses config text (file contents) plus `key=value` overrides.
inline RunConfig parse_config_text(std::string_view text, const std::string& source,
                                   const std::vector<std::string>& overrides = {})
{
    detail::ConfigEntries entries;
    detail::read_entries(text, source, entries);
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const std::string origin = "override " + std::to_string(i + 1) + " '" + overrides[i] + "'";
        auto [k, v] = detail::split_assignment(overrides[i], origin);
        entries[k] = {v, origin};
    }
    return build_run_config(entries);
}

/// Reads `path` (if non-empty) and applies overrides.
inline RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {})
{
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, path.empty() ? std::string("<flags>") : path, overrides);
}

} // namespace psys
