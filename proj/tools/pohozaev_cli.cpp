#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pohozaev/errors.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/io.hpp"
#include "pohozaev/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pohozaev;

namespace {

struct Options
{
    std::string config;
    std::string out;
    std::int64_t seed = -1;
    int jobs = 1;
    bool force = false;
};

RunConfig resolve(Options const& o)
{
    RunConfig cfg = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
    if (!o.out.empty()) {
        cfg.out_dir = o.out;
    }
    if (o.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(o.seed);
    }
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string path(RunConfig const& cfg, std::string const& name)
{
    return (fs::path(cfg.out_dir) / name).string();
}

void emit_config(RunConfig const& cfg)
{
    nlohmann::json j = nlohmann::json::object();
    for (auto const& [k, v] : cfg.entries()) {
        j[k] = v;
    }
    write_json(path(cfg, "config.json"), ArtifactHeader::make("config", cfg), j);
}

bool stage_check(RunConfig const& cfg, Model const& model)
{
    auto const out = run_check(cfg, model);
    write_json(path(cfg, "check_f.json"), ArtifactHeader::make("check_f", cfg), out.f.to_json());
    write_json(path(cfg, "check_V.json"), ArtifactHeader::make("check_V", cfg), out.V.to_json());
    for (auto const* rep : {&out.f, &out.V}) {
        for (auto const& e : rep->entries) {
            std::cout << (e.pass ? "  pass  " : "  FAIL  ") << e.name << "  value " << e.value << "  threshold "
                      << e.threshold << (e.detail.empty() ? "" : "  (" + e.detail + ")") << '\n';
        }
    }
    std::cout << "check: " << (out.pass() ? "all hypotheses pass" : "hypothesis failure") << '\n';
    return out.pass();
}

LimitOutcome stage_limit(RunConfig const& cfg, Model const& model)
{
    auto out = run_limit(cfg, model);
    write_csv(path(cfg, "profile.csv"), ArtifactHeader::make("profile", cfg), profile_table(*out.w));
    auto j = to_json(*out.w);
    j["u0"] = out.solution.u0;
    j["m"] = out.energy.m;
    j["grad_norm_sq"] = out.energy.grad_norm_sq;
    j["F_integral"] = out.energy.F_integral;
    j["J0"] = out.energy.J0;
    j["identity_gap"] = out.energy.identity_gap;
    j["separatrix_count"] = out.solution.separatrix_count;
    j["bisection_steps"] = out.solution.bisection_steps;
    write_json(path(cfg, "ground_state.json"), ArtifactHeader::make("ground_state", cfg), j);
    std::cout << "limit: u0* = " << out.solution.u0 << ", m = p0 = " << out.p0
              << ", decay exponent = " << out.w->decay_exponent << '\n';
    return out;
}

void stage_scan(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    auto const out = run_scan(cfg, model, limit, jobs);
    write_csv(path(cfg, "interaction.csv"), ArtifactHeader::make("interaction", cfg),
              interaction_table(out.interaction));
    nlohmann::json j = {{"interaction", to_json(out.interaction)}, {"acp", to_json(out.acp)}};
    for (auto const& k : out.kernels) {
        j["kernels"][k.tag] = to_json(k.fit);
        write_csv(path(cfg, k.tag + ".csv"), ArtifactHeader::make(k.tag, cfg), exponent_table(k.fit));
    }
    write_json(path(cfg, "interaction.json"), ArtifactHeader::make("interaction", cfg), j);
    std::cout << "scan: epsilon slope " << out.interaction.epsilon_fit.slope << ", gradient slope "
              << out.interaction.grad_fit.slope << ", cross/epsilon decreasing "
              << (out.interaction.ratio_decreasing ? "yes" : "no") << '\n';
    for (auto const& k : out.kernels) {
        std::cout << "  " << k.tag << ": slope " << k.fit.slope << " (predicted " << k.fit.predicted_exponent << ")\n";
    }
}

void stage_project(RunConfig const& cfg, Model const& model, LimitOutcome const& limit)
{
    auto const out = run_project(cfg, model, limit);
    nlohmann::json j = {{"ground", to_json(out.ground)},
                        {"dilation", out.dilation},
                        {"dilation_gap", out.dilation_gap}};
    if (model.pot) {
        j["ground_with_V"] = to_json(out.ground_with_V);
    }
    CsvTable t{{"R", "s_star", "abs_s_minus_2", "energy", "unique_flag"}, {}};
    for (std::size_t i = 0; i < out.R.size(); ++i) {
        auto const& p = out.two_bump[i];
        j["two_bump"].push_back({{"R", out.R[i]}, {"result", to_json(p)}});
        t.rows.push_back({out.R[i], p.s_star, std::abs(p.s_star - 2.0), p.projected_energy, std::int64_t{p.unique}});
    }
    write_json(path(cfg, "projection.json"), ArtifactHeader::make("projection", cfg), j);
    write_csv(path(cfg, "projection.csv"), ArtifactHeader::make("projection", cfg), t);
    std::cout << "project: s*(w) - 1 = " << out.ground.s_star - 1.0 << '\n';
    for (std::size_t i = 0; i < out.R.size(); ++i) {
        std::cout << "  R = " << out.R[i] << ": S = " << out.two_bump[i].s_star << '\n';
    }
}

LandscapeReport stage_landscape(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    auto rep = run_landscape(cfg, model, limit, jobs);
    write_csv(path(cfg, "landscape.csv"), ArtifactHeader::make("landscape", cfg), landscape_table(rep));
    write_json(path(cfg, "landscape.json"), ArtifactHeader::make("landscape", cfg), to_json(rep));
    std::cout << "landscape: max/p0 = " << rep.max_energy / limit.p0 << ", eta = " << rep.eta
              << ", endpoints/p0 = " << rep.endpoint_max / limit.p0 << '\n';
    return rep;
}

std::vector<SearchRun> stage_minimize(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    auto runs = run_search(cfg, model, limit, jobs);
    nlohmann::json j = nlohmann::json::array();
    for (auto const& r : runs) {
        auto const& st = r.result.state;
        write_csv(path(cfg, "search_" + r.tag + "_history.csv"), ArtifactHeader::make("search_history", cfg),
                  history_table(st));
        write_csv(path(cfg, "search_" + r.tag + "_field.csv"), ArtifactHeader::make("search_field", cfg),
                  field_table(st.u));
        j.push_back({{"tag", r.tag},
                     {"verdict", to_string(r.result.verdict)},
                     {"stop_reason", st.stop_reason},
                     {"iterations", st.iteration},
                     {"energy", st.energy},
                     {"energy_over_p0", st.energy / limit.p0},
                     {"residual_norm", st.residual_norm},
                     {"J_V", st.J_V},
                     {"J_scale", st.J_scale},
                     {"barycenter", st.barycenter},
                     {"s", st.u.s},
                     {"report", to_json(st.report)}});
        std::cout << "minimize " << r.tag << ": " << to_string(r.result.verdict) << " after " << st.iteration
                  << " iterations, energy/p0 = " << st.energy / limit.p0 << ", residual = " << st.residual_norm
                  << '\n';
    }
    write_json(path(cfg, "search.json"), ArtifactHeader::make("search", cfg), j);
    return runs;
}

void stage_levels(RunConfig const& cfg, Model const& model, LimitOutcome const& limit,
                  LandscapeReport const* landscape, std::vector<SearchRun> const& runs)
{
    auto const rep = run_levels(cfg, model, limit, landscape, runs);
    write_json(path(cfg, "level_report.json"), ArtifactHeader::make("level_report", cfg), to_json(rep));
    std::cout << "levels: p0 = " << rep.p0 << ", p_V upper bound = " << rep.pV_upper
              << ", landscape max = " << rep.landscape_max << '\n';
}

template <class F>
auto staged(std::string const& stage, F&& f)
{
    try {
        return f();
    } catch (ConfigError const&) {
        throw;
    } catch (Error const& e) {
        throw Error(stage_message(stage, e.what()), e.code());
    }
}

int report(RunConfig const& cfg)
{
    auto const lv = read_json(path(cfg, "level_report.json"));
    std::cout << "p0                 " << lv.at("p0") << '\n'
              << "p_V upper bound    " << lv.at("pV_upper") << '\n'
              << "landscape max      " << lv.at("landscape_max") << '\n'
              << "eta                " << lv.at("eta") << '\n'
              << "endpoint max       " << lv.at("endpoint_max") << '\n'
              << "rho                " << lv.at("rho") << '\n';
    bool ok = true;
    for (auto const& [name, v] : lv.at("checks").items()) {
        std::cout << (v.get<bool>() ? "  pass  " : "  FAIL  ") << name << '\n';
        ok = ok && v.get<bool>();
    }
    if (fs::exists(path(cfg, "search.json"))) {
        for (auto const& r : read_json(path(cfg, "search.json"))) {
            std::cout << "search " << r.at("tag").get<std::string>() << ": " << r.at("verdict").get<std::string>()
                      << ", energy/p0 " << r.at("energy_over_p0") << '\n';
        }
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pohozaev-manifold bound-state solver and estimate checker"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Config file (flat dotted key = value)");
        sub->add_option("--out", opt.out, "Output directory");
        sub->add_option("--seed", opt.seed, "Seed for Monte Carlo stages");
        sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--force", opt.force, "Run the pipeline even if the hypothesis check fails");
    };
    std::vector<std::pair<std::string, std::string>> const cmds{
        {"check", "Check the hypotheses on f and V"},
        {"limit", "Solve the limit problem for the fast-decay ground state"},
        {"scan-interaction", "Interaction integrals and kernel decay scans over R"},
        {"project", "Pohozaev projection of the ground state and two-bump fields"},
        {"landscape", "Projected energy over the lambda grid"},
        {"minimize", "Descent on the Pohozaev manifold from two-bump starts"},
        {"pipeline", "All stages followed by the level diagnostics"},
        {"report", "Summarize the level report in the output directory"},
    };
    for (auto const& [name, help] : cmds) {
        add_common(app.add_subcommand(name, help));
    }
    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::usage_error);
    }
    std::string const cmd = app.get_subcommands().front()->get_name();

    try {
        auto const cfg = resolve(opt);
        if (cmd == "report") {
            return report(cfg);
        }
        emit_config(cfg);
        auto const model = build_model(cfg);
        if (cmd == "check") {
            return stage_check(cfg, model) ? 0 : 1;
        }
        if (cmd == "pipeline") {
            bool const ok = staged("check", [&] { return stage_check(cfg, model); });
            if (!ok && !opt.force) {
                std::cerr << "hypothesis check failed; rerun with --force to continue\n";
                return static_cast<int>(ExitCode::scientific_failure);
            }
        }
        auto const limit = staged("limit", [&] { return stage_limit(cfg, model); });
        if (cmd == "limit") {
            return 0;
        }
        if (cmd == "scan-interaction" || cmd == "pipeline") {
            staged("scan-interaction", [&] { stage_scan(cfg, model, limit, opt.jobs); });
        }
        if (cmd == "project" || cmd == "pipeline") {
            staged("project", [&] { stage_project(cfg, model, limit); });
        }
        std::optional<LandscapeReport> land;
        if (cmd == "landscape" || cmd == "pipeline") {
            land = staged("landscape", [&] { return stage_landscape(cfg, model, limit, opt.jobs); });
        }
        std::vector<SearchRun> runs;
        if (cmd == "minimize" || cmd == "pipeline") {
            runs = staged("minimize", [&] { return stage_minimize(cfg, model, limit, opt.jobs); });
        }
        if (cmd == "pipeline") {
            staged("levels", [&] { stage_levels(cfg, model, limit, land ? &*land : nullptr, runs); });
        }
        return 0;
    } catch (Error const& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical_failure);
    }
}
