#pragma once

// CSV/JSON emitters and the snapshot CSV reader. Every float goes out with
// 17 significant digits; every file starts with the tool version and the
// hash of the effective configuration.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "psys/characteristics.hpp"
#include "psys/errors.hpp"
#include "psys/field.hpp"
#include "psys/pressure.hpp"
#include "psys/solver.hpp"
#include "psys/verify.hpp"

namespace psys {

using ojson = nlohmann::ordered_json;

inline constexpr const char* tool_name = "psys";
inline constexpr const char* tool_version = "0.1.0";

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

inline std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string header_line(const std::string& config_hash)
{
    return std::string("# ") + tool_name + " " + tool_version + " config_hash=" + config_hash;
}

inline ojson generator_json(const std::string& config_hash)
{
    return ojson{{"tool", tool_name}, {"version", tool_version}, {"config_hash", config_hash}};
}

/// JSON number, or null for non-finite values.
inline ojson num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

inline std::string dump(const ojson& j)
{
    // 17 significant digits for doubles comes from nlohmann's round-trip
    // formatting; indentation keeps diffs readable.
    return j.dump(2) + "\n";
}

// --- snapshots --------------------------------------------------------------

inline void write_snapshot_rows(std::ostream& os, double t, const StateField& s)
{
    const auto& g = s.grid();
    for (std::size_t j = 0; j < g.n(); ++j)
        os << fmt17(t) << ',' << fmt17(g.node(j)) << ',' << fmt17(s.u()[j]) << ','
           << fmt17(s.v()[j]) << '\n';
}

inline void write_snapshots_csv(std::ostream& os, const Trajectory& traj,
                                const std::string& config_hash)
{
    os << header_line(config_hash) << '\n' << "t,x,u,v\n";
    for (const auto& snap : traj.snapshots())
        write_snapshot_rows(os, snap.t, snap.state);
}

inline void write_field_csv(std::ostream& os, double t, const StateField& s,
                            const std::string& config_hash)
{
    os << header_line(config_hash) << '\n' << "t,x,u,v\n";
    write_snapshot_rows(os, t, s);
}

struct LoadedField {
    double t;
    StateField state;
};

/// Reads the first snapshot (all rows sharing the first t value) of a
/// `t,x,u,v` CSV. Comment lines starting with '#' are skipped.
inline LoadedField read_snapshot_csv(std::istream& is)
{
    std::string line;
    bool header = false;
    std::vector<double> u, v;
    double t0 = 0.0;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            if (line != "t,x,u,v")
                throw ConfigError("snapshot csv line " + std::to_string(lineno) +
                                  ": expected header 't,x,u,v'");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(ss, cell, ','))
                throw ConfigError("snapshot csv line " + std::to_string(lineno) +
                                  ": expected 4 columns");
            try {
                std::size_t used = 0;
                vals[c] = std::stod(cell, &used);
                if (used != cell.size())
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ConfigError("snapshot csv line " + std::to_string(lineno) +
                                  ": bad number '" + cell + "'");
            }
        }
        if (u.empty())
            t0 = vals[0];
        else if (vals[0] != t0)
            break;
        u.push_back(vals[2]);
        v.push_back(vals[3]);
    }
    if (u.empty())
        throw ConfigError("snapshot csv: no data rows");
    try {
        const PeriodicGrid grid(u.size());
        return {t0, StateField(grid, std::move(u), std::move(v))};
    } catch (const DomainError& e) {
        throw ConfigError(std::string("snapshot csv: ") + e.what());
    }
}

// --- series / run report ----------------------------------------------------

inline void write_series_csv(std::ostream& os, const Trajectory& traj,
                             const std::string& config_hash)
{
    os << header_line(config_hash) << '\n' << "t,max_u,min_u,max_abs_ux,max_abs_vx,tail_ratio\n";
    for (const auto& r : traj.series())
        os << fmt17(r.t) << ',' << fmt17(r.max_u) << ',' << fmt17(r.min_u) << ','
           << fmt17(r.max_abs_ux) << ',' << fmt17(r.max_abs_vx) << ',' << fmt17(r.tail_ratio)
           << '\n';
}

inline ojson run_report_json(const Trajectory& traj, const std::string& config_hash)
{
    ojson j;
    j["generator"] = generator_json(config_hash);
    j["status"] = to_string(traj.status());
    j["t_detect"] = traj.t_event() ? num(*traj.t_event()) : ojson(nullptr);
    j["steps"] = traj.steps();
    j["t0"] = num(traj.t0());
    j["t_end"] = num(traj.t_end());
    j["snapshots"] = traj.snapshots().size();
    return j;
}

// --- curves -----------------------------------------------------------------

inline void write_curve_csv(std::ostream& os, const CharacteristicCurve& c,
                            const std::string& config_hash)
{
    os << header_line(config_hash) << '\n' << "t,x,u,r1,r2,beta,K_accum\n";
    for (const auto& s : c.samples)
        os << fmt17(s.t) << ',' << fmt17(s.x) << ',' << fmt17(s.u) << ',' << fmt17(s.r1) << ','
           << fmt17(s.r2) << ',' << fmt17(s.beta) << ',' << fmt17(s.k_accum) << '\n';
}

inline ojson curve_summary_json(const CharacteristicCurve& c)
{
    ojson j;
    j["family"] = to_string(c.family);
    j["direction"] = to_string(c.direction);
    j["x0"] = num(c.samples.front().x);
    j["termination"] = to_string(c.termination);
    j["t_hit"] = c.t_hit ? num(*c.t_hit) : ojson(nullptr);
    j["t_start"] = num(c.t_start());
    j["t_end"] = num(c.t_end());
    j["samples"] = c.samples.size();
    return j;
}

// --- reports ----------------------------------------------------------------

inline ojson to_json(const ValidationReport& r)
{
    ojson v = ojson::array();
    for (const auto& x : r.violations)
        v.push_back({{"kind", to_string(x.kind)}, {"u", num(x.u)}, {"value", num(x.value)}});
    return ojson{{"u_min", num(r.u_min)},
                 {"u_max", num(r.u_max)},
                 {"n_samples", r.n_samples},
                 {"ok", r.ok()},
                 {"violations", v}};
}

inline ojson to_json(const ScenarioReport& r)
{
    ojson metrics = ojson::object();
    for (const auto& [k, v] : r.metrics)
        metrics[k] = num(v);
    ojson thresholds = ojson::object();
    for (const auto& [k, v] : r.thresholds)
        thresholds[k] = num(v);
    ojson j;
    j["scenario_id"] = r.scenario_id;
    j["law"] = describe(r.law);
    j["seed"] = r.seed;
    j["metrics"] = metrics;
    j["verdict"] = to_string(r.verdict);
    j["thresholds"] = thresholds;
    j["artifacts"] = r.artifacts;
    if (!r.reason.empty())
        j["reason"] = r.reason;
    return j;
}

inline ojson to_json(const EnergyDiagnostics& d)
{
    return ojson{{"E", num(d.energy)},
                 {"ddot_formula", num(d.ddot_formula)},
                 {"ddot_direct", num(d.ddot_direct)},
                 {"identity_gap", num(d.identity_gap)}};
}

} // namespace psys
