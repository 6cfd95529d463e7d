// psys: command-line front end for the p-system toolkit.
//
//   psys <simulate|trace|predict|energy|verify|validate-law>
//        [-c config.txt] [-s key=value ...] [-o out_dir]
//
// Exit codes: 0 success / all scenarios pass, 1 scenario failure, invariant
// violation or domain error, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psys/psys.hpp"

namespace fs = std::filesystem;
using namespace psys;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;

struct Context {
    RunConfig cfg;
    std::string hash;
    fs::path out;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + path.string() + "'");
    fn(f);
}

Context prepare(const std::string& subcommand, const std::string& config_path,
                const std::vector<std::string>& sets)
{
    Context ctx{parse_config(config_path, sets), {}, {}};
    ctx.hash = ctx.cfg.hash();
    ctx.out = ctx.cfg.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec || !fs::is_directory(ctx.out))
        throw ConfigError("cannot create out_dir '" + ctx.out.string() + "'");

    std::string log = header_line(ctx.hash) + "\n";
    log += "# subcommand " + subcommand + "\n";
    log += ctx.cfg.canonical();
    log += "out_dir = " + ctx.cfg.out_dir + "\n";
    for (const auto& w : ctx.cfg.warnings)
        log += "# warning: " + w + "\n";
    write_text(ctx.out / "run.log", log);
    for (const auto& w : ctx.cfg.warnings)
        std::cerr << "warning: " << w << "\n";
    return ctx;
}

struct Start {
    double t0;
    StateField state;
};

Start initial_state(const RunConfig& cfg)
{
    if (cfg.preset == Preset::csv) {
        std::ifstream in(cfg.field_csv);
        if (!in)
            throw ConfigError("cannot open field_csv '" + cfg.field_csv + "'");
        auto loaded = read_snapshot_csv(in);
        return {loaded.t, std::move(loaded.state)};
    }
    return {cfg.t0, realize(cfg.law, PeriodicGrid(cfg.n), cfg.data)};
}

Trajectory simulate_run(const Context& ctx)
{
    auto start = initial_state(ctx.cfg);
    validate(ctx.cfg.solver, start.t0);
    return run(ctx.cfg.law, start.state, start.t0, ctx.cfg.solver);
}

int cmd_simulate(const Context& ctx)
{
    const auto traj = simulate_run(ctx);
    write_with(ctx.out / "snapshots.csv", [&](std::ostream& os) { write_snapshots_csv(os, traj, ctx.hash); });
    write_with(ctx.out / "series.csv", [&](std::ostream& os) { write_series_csv(os, traj, ctx.hash); });
    write_text(ctx.out / "run.json", dump(run_report_json(traj, ctx.hash)));
    std::cout << "status " << to_string(traj.status()) << ", t_end " << fmt17(traj.t_end())
              << ", steps " << traj.steps() << "\n";
    return exit_ok;
}

std::vector<Family> selected_families(FamilySelection s)
{
    switch (s) {
    case FamilySelection::first: return {Family::first};
    case FamilySelection::second: return {Family::second};
    case FamilySelection::both: break;
    }
    return {Family::first, Family::second};
}

std::string seed_tag(std::size_t i)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", i);
    return buf;
}

int cmd_trace(const Context& ctx)
{
    const auto traj = simulate_run(ctx);
    if (traj.snapshots().size() < 2) {
        std::cerr << "trace: run produced no time window (status " << to_string(traj.status())
                  << ")\n";
        return exit_failure;
    }
    const TrajectoryInterpolant field(traj);
    const Direction dir = traj.forward() ? Direction::forward : Direction::backward;
    const double window = std::abs(traj.t_end() - traj.t0());
    const double horizon = ctx.cfg.horizon > 0.0 ? std::min(ctx.cfg.horizon, window) : window;
    TraceOptions topt;
    topt.eps_b = ctx.cfg.classify.eps_b;
    topt.t_start = traj.t0();

    fs::create_directories(ctx.out / "curves");
    ojson curves = ojson::array();
    std::size_t b_first = 0, b_second = 0;
    const ClassLabel b = dir == Direction::forward ? ClassLabel::B_plus : ClassLabel::B_minus;
    for (std::size_t i = 0; i < ctx.cfg.seeds; ++i) {
        const double x0 = static_cast<double>(i) / static_cast<double>(ctx.cfg.seeds);
        for (Family fam : selected_families(ctx.cfg.families)) {
            ojson entry{{"x0", x0}, {"family", to_string(fam)}};
            try {
                const auto curve = trace(ctx.cfg.law, field, x0, fam, dir, topt);
                const auto label = classify(curve, horizon, ctx.cfg.classify);
                const std::string file =
                    std::string("curves/") + to_string(fam) + "_" + seed_tag(i) + ".csv";
                write_with(ctx.out / file, [&](std::ostream& os) { write_curve_csv(os, curve, ctx.hash); });
                entry["label"] = to_string(label);
                entry["termination"] = to_string(curve.termination);
                entry["t_hit"] = curve.t_hit ? num(*curve.t_hit) : ojson(nullptr);
                entry["t_end"] = num(curve.t_end());
                entry["file"] = file;
                if (label == b)
                    ++(fam == Family::first ? b_first : b_second);
            } catch (const EllipticStart& e) {
                entry["label"] = nullptr;
                entry["skipped"] = e.what();
            }
            curves.push_back(entry);
        }
    }
    const std::size_t violations = b_first * b_second;
    ojson j;
    j["generator"] = generator_json(ctx.hash);
    j["direction"] = to_string(dir);
    j["horizon"] = num(horizon);
    j["thresholds"] = {{"growth_factor", num(ctx.cfg.classify.growth_factor)},
                       {"eps_b", num(ctx.cfg.classify.eps_b)}};
    j["run_status"] = to_string(traj.status());
    j["curves"] = curves;
    j["bb_pair_violations"] = violations;
    write_text(ctx.out / "classification.json", dump(j));
    std::cout << curves.size() << " curves traced, bb_pair_violations " << violations << "\n";
    return violations == 0 ? exit_ok : exit_failure;
}

int cmd_predict(const Context& ctx)
{
    const auto traj = simulate_run(ctx);
    if (traj.snapshots().size() < 2) {
        std::cerr << "predict: run produced no time window (status " << to_string(traj.status())
                  << ")\n";
        return exit_failure;
    }
    const TrajectoryInterpolant field(traj);
    const Direction dir = traj.forward() ? Direction::forward : Direction::backward;
    TraceOptions topt;
    topt.eps_b = ctx.cfg.classify.eps_b;
    topt.t_start = traj.t0();

    double best = std::numeric_limits<double>::infinity();
    write_with(ctx.out / "predict.csv", [&](std::ostream& os) {
        os << header_line(ctx.hash) << "\n" << "x0,family,beta0,t_predicted\n";
        for (std::size_t i = 0; i < ctx.cfg.seeds; ++i) {
            const double x0 = static_cast<double>(i) / static_cast<double>(ctx.cfg.seeds);
            for (Family fam : selected_families(ctx.cfg.families)) {
                double beta0 = std::numeric_limits<double>::quiet_NaN();
                std::optional<double> tp;
                try {
                    const auto curve = trace(ctx.cfg.law, field, x0, fam, dir, topt);
                    beta0 = curve.samples.front().beta;
                    tp = predict_blowup(ctx.cfg.law, curve, beta0, ctx.cfg.extrapolate);
                } catch (const EllipticStart&) {
                }
                if (tp)
                    best = dir == Direction::forward ? std::min(best, *tp)
                                                     : (std::isinf(best) ? *tp : std::max(best, *tp));
                os << fmt17(x0) << ',' << to_string(fam) << ',' << fmt17(beta0) << ','
                   << (tp ? fmt17(*tp) : std::string("inf")) << "\n";
            }
        }
    });
    ojson j;
    j["generator"] = generator_json(ctx.hash);
    j["run_status"] = to_string(traj.status());
    j["t_detect"] = traj.t_event() ? num(*traj.t_event()) : ojson(nullptr);
    j["t_predicted"] = num(best);
    write_text(ctx.out / "predict.json", dump(j));
    std::cout << "earliest predicted blow-up " << (std::isfinite(best) ? fmt17(best) : "none")
              << "\n";
    return exit_ok;
}

int cmd_energy(const Context& ctx)
{
    const auto start = initial_state(ctx.cfg);
    const auto d = energy_diagnostics(ctx.cfg.law, start.state, ConcaveGauge{ctx.cfg.gauge});
    ojson j;
    j["generator"] = generator_json(ctx.hash);
    j["gauge"] = to_string(ctx.cfg.gauge);
    const ojson body = to_json(d);
    for (const auto& [k, v] : body.items())
        j[k] = v;
    write_text(ctx.out / "energy.json", dump(j));
    std::cout << dump(to_json(d));
    return exit_ok;
}

int cmd_verify(const Context& ctx)
{
    fs::create_directories(ctx.out / "reports");
    ojson reports = ojson::array();
    std::size_t pass = 0, fail = 0, inconclusive = 0;
    for (const auto& id : ctx.cfg.scenarios) {
        auto entry = run_suite_entry(id, ctx.cfg.suite);
        for (std::size_t k = 0; k < entry.size(); ++k) {
            auto& r = entry[k];
            const std::string file = "reports/" + id + "_" + std::to_string(k) + ".json";
            r.artifacts.push_back(file);
            ojson rj;
            rj["generator"] = generator_json(ctx.hash);
            const ojson body = to_json(r);
            for (const auto& [key, v] : body.items())
                rj[key] = v;
            write_text(ctx.out / file, dump(rj));
            reports.push_back(body);
            switch (r.verdict) {
            case Verdict::pass: ++pass; break;
            case Verdict::fail: ++fail; break;
            case Verdict::inconclusive: ++inconclusive; break;
            }
            std::cout << to_string(r.verdict) << "  " << id << " [" << r.scenario_id << ", "
                      << describe(r.law) << "]";
            if (!r.reason.empty())
                std::cout << "  " << r.reason;
            std::cout << "\n";
        }
    }
    const bool all_pass = fail == 0 && inconclusive == 0;
    ojson j;
    j["generator"] = generator_json(ctx.hash);
    j["summary"] = {{"total", pass + fail + inconclusive},
                    {"pass", pass},
                    {"fail", fail},
                    {"inconclusive", inconclusive},
                    {"all_pass", all_pass}};
    j["reports"] = reports;
    write_text(ctx.out / "verify.json", dump(j));
    std::cout << pass << "/" << (pass + fail + inconclusive) << " pass\n";
    return all_pass ? exit_ok : exit_failure;
}

int cmd_validate_law(const Context& ctx)
{
    const auto r = validate_law(ctx.cfg.law, ctx.cfg.law_u_min, ctx.cfg.law_u_max, ctx.cfg.law_samples);
    ojson j;
    j["generator"] = generator_json(ctx.hash);
    j["law"] = describe(ctx.cfg.law);
    const ojson body = to_json(r);
    for (const auto& [k, v] : body.items())
        j[k] = v;
    write_text(ctx.out / "law_validation.json", dump(j));
    std::cout << describe(ctx.cfg.law) << ": " << (r.ok() ? "ok" : "violations found") << " ("
              << r.violations.size() << ")\n";
    return r.ok() ? exit_ok : exit_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pseudo-spectral solver and characteristic diagnostics for the p-system "
                 "u_t = -v_x, v_t = p(u)_x on the unit circle"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Context&);
    };
    const Sub subs[] = {
        {"simulate", "run the solver; writes snapshots.csv, series.csv, run.json", cmd_simulate},
        {"trace", "trace characteristics from equispaced seeds; curve CSVs + classification.json",
         cmd_trace},
        {"predict", "Riccati blow-up prediction per seed; predict.csv", cmd_predict},
        {"energy", "elliptic energy diagnostics of the initial field; energy.json", cmd_energy},
        {"verify", "run the scenario suite; verify.json", cmd_verify},
        {"validate-law", "check convexity/normalization of the pressure law", cmd_validate_law},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> registered;
    for (const auto& s : subs) {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("-c,--config", config_path, "key = value config file");
        sc->add_option("-s,--set", sets, "override, key=value (repeatable)");
        sc->add_option("-o,--out", out_dir, "output directory (same as out_dir=...)");
        registered.emplace_back(sc, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    if (!out_dir.empty())
        sets.push_back("out_dir=" + out_dir);
    for (const auto& [sc, s] : registered) {
        if (!sc->parsed())
            continue;
        try {
            const Context ctx = prepare(s->name, config_path, sets);
            return s->fn(ctx);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return exit_config;
        } catch (const DomainError& e) {
            std::cerr << "domain error: " << e.what() << "\n";
            return exit_failure;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_failure;
        }
    }
    return exit_config;
}
