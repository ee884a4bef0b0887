#include "pohozaev/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "pohozaev/errors.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/parallel.hpp"

namespace pohozaev {

namespace {

std::string tagged(std::string const& prefix, double x)
{
    std::ostringstream os;
    os << prefix << x;
    return os.str();
}

} // namespace

Model build_model(RunConfig const& cfg)
{
    cfg.validate();
    auto nl = [&]() -> Nonlinearity {
        if (cfg.nonlinearity == "power") {
            return power_model(cfg.power, cfg.N);
        }
        if (cfg.nonlinearity == "table") {
            return table_model_from_file(cfg.table_path, cfg.N);
        }
        if (cfg.N != 3) {
            throw ConfigError("builtin model " + cfg.nonlinearity + " is posed in N = 3");
        }
        return builtin_model(cfg.nonlinearity);
    }();
    Model m{std::move(nl), std::nullopt};
    if (cfg.potential_kind == "model") {
        m.pot = model_potential(cfg.potential_k, cfg.potential_scale, cfg.N);
    }
    return m;
}

McSampler sampler(RunConfig const& cfg)
{
    McSampler mc;
    mc.seed = cfg.seed;
    mc.samples = cfg.mc_samples;
    return mc;
}

CheckOutcome run_check(RunConfig const& cfg, Model const& model)
{
    CheckOutcome out;
    out.f = check_f_hypotheses(model.nl);
    if (model.pot) {
        PotentialQuadSpec quad;
        quad.seed = cfg.seed;
        out.V = check_V_hypotheses(*model.pot, cfg.N, sobolev_constant(cfg.N), quad);
    }
    return out;
}

LimitOutcome run_limit(RunConfig const& cfg, Model const& model)
{
    ShootOptions opts;
    opts.r_max = cfg.limit_r_max;
    LimitOutcome out;
    out.solution = find_fast_decay(model.nl, cfg.N, default_bracket(model.nl), cfg.limit_tol, opts);
    out.w = std::make_shared<RadialProfile const>(out.solution.profile);
    out.energy = limit_energy(*out.w, model.nl);
    out.p0 = out.energy.m;
    return out;
}

ScanOutcome run_scan(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    ScanOutcome out;
    auto const y0 = cfg.y0();
    auto const y = cfg.y();
    std::vector<TwoBumpConfig> list;
    for (double R : cfg.R_scan) {
        TwoBumpConfig c;
        c.y0 = y0;
        c.y = y;
        c.lambda = cfg.scan_lambda;
        c.R = R;
        c.validate();
        list.push_back(c);
    }
    if (list.size() >= 2) {
        out.interaction = interaction_suite(limit.w, model.nl, list, {cfg.mixed_alpha, cfg.mixed_beta}, jobs);
    }

    auto const mc = sampler(cfg);
    auto const perp = perpendicular_partner(y0);
    auto const minus = collinear_partner(y0);
    struct Job
    {
        std::string tag;
        bool three;
        double a, b;
        std::vector<double> partner;
    };
    double const k = model.pot ? model.pot->k() : 3.0;
    std::vector<Job> const jobs_list{
        {"kernel_4_2_collinear", false, 4.0, 2.0, minus},
        {"kernel_2_2_collinear", false, 2.0, 2.0, minus},
        {"kernel_4_2_perpendicular", false, 4.0, 2.0, perp},
        {"three_center_collinear", true, k, cfg.N - 2.0, minus},
    };
    out.kernels.resize(jobs_list.size());
    parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
        auto const& j = jobs_list[i];
        out.kernels[i].tag = j.tag;
        out.kernels[i].fit = j.three ? clapp_maia_three_center_scan(j.a, j.b, y0, j.partner, cfg.R_scan, mc)
                                     : clapp_maia_scan(j.a, j.b, y0, j.partner, cfg.R_scan, mc);
    });

    double const C5 = cfg.acp_C5 > 0.0 ? cfg.acp_C5 : model.nl.gamma();
    if (std::isfinite(C5)) {
        out.acp = acp_pointwise_check(model.nl, C5, 10000, cfg.seed);
    }
    return out;
}

ProjectOutcome run_project(RunConfig const& cfg, Model const& model, LimitOutcome const& limit)
{
    ProjectionOptions po;
    po.lo = cfg.projection_lo;
    po.hi = cfg.projection_hi;
    po.tol = cfg.projection_tol;

    ProjectOutcome out;
    auto const m = radial_moments(*limit.w, model.nl);
    out.ground = project(m, nullptr, model.nl, po);
    auto const wa = limit.w->dilated(out.dilation);
    auto const pa = project(radial_moments(wa, model.nl), nullptr, model.nl, po);
    out.dilation_gap = std::abs(pa.s_star * out.dilation - out.ground.s_star);
    if (model.pot) {
        out.ground_with_V = project(m, model.potential(), model.nl, po);
    }
    auto const mc = sampler(cfg);
    for (double R : cfg.R_scan) {
        TwoBumpConfig c;
        c.y0 = cfg.y0();
        c.y = cfg.y();
        c.lambda = 0.5;
        c.R = R;
        TwoBumpField const U(limit.w, c);
        FieldMoments mm;
        if (U.axisymmetric()) {
            auto const grid = U.grid();
            auto const est = two_bump_integrals(U, model.nl, grid, false);
            mm = two_bump_moments(U, model.nl, grid, &est.value);
        } else {
            mm = two_bump_moments_mc(U, model.nl, mc);
        }
        out.R.push_back(R);
        out.two_bump.push_back(project(mm, model.potential(), model.nl, po));
    }
    return out;
}

LandscapeReport run_landscape(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    std::string const tag = cfg.y_geometry;
    return projection_landscape(limit.w, model.potential(), model.nl, cfg.landscape_R, cfg.lambda_grid(),
                                {{tag, cfg.y()}}, cfg.y0(), limit.p0, sampler(cfg), jobs);
}

std::vector<SearchRun> run_search(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs)
{
    std::vector<SearchRun> runs;
    TwoBumpConfig start;
    start.y0 = cfg.y0();
    start.y = collinear_partner(start.y0);
    start.lambda = cfg.search_lambda;
    start.R = cfg.search_R;
    start.validate();
    runs.push_back({"two_bump_reflected", start, {}});
    if (cfg.search_asymmetric) {
        runs.push_back({"two_bump_free", start, {}});
    }

    SearchOptions opts;
    opts.tol_r = cfg.search_tol_r;
    opts.tol_e = cfg.search_tol_e;
    opts.max_iter = cfg.search_max_iter;
    opts.descent = cfg.search_descent == "plain" ? Descent::plain : Descent::sobolev;

    parallel_for(runs.size(), jobs, [&](std::size_t i) {
        auto& run = runs[i];
        auto spec = two_bump_grid_spec(run.start, cfg.search_spacing, cfg.search_growth, cfg.search_radius);
        auto const grid = std::make_shared<NodalGrid const>(spec);
        TwoBumpField const U(limit.w, run.start);
        auto u0 = NodalField::sample(grid, [&](double z, double rho) { return U.value_axi(z, rho); });
        SearchOptions o = opts;
        o.enforce_reflection = run.tag == "two_bump_reflected" && cfg.search_reflection && grid->symmetric();
        run.result = minimize_on_manifold(std::move(u0), model.potential(), model.nl, o);
    });
    return runs;
}

LevelReport run_levels(RunConfig const& cfg, Model const& model, LimitOutcome const& limit,
                       LandscapeReport const* landscape, std::vector<SearchRun> const& runs)
{
    std::vector<Candidate> cands;
    if (landscape != nullptr) {
        for (auto const& c : landscape->cells) {
            if (c.ok) {
                cands.push_back({tagged("landscape lambda=", c.lambda) + " " + c.y_tag, c.energy, c.grad_norm,
                                 std::abs(c.barycenter), landscape->R});
            }
        }
    }
    for (auto const& r : runs) {
        auto const& st = r.result.state;
        cands.push_back({"search " + r.tag + " (" + to_string(r.result.verdict) + ")", st.energy,
                         std::sqrt(st.report.grad_norm_sq), std::abs(st.barycenter), r.start.R});
    }
    for (double R : cfg.translation_R) {
        TwoBumpConfig c;
        c.y0 = cfg.y0();
        c.y = collinear_partner(c.y0);
        c.lambda = 1.0;
        c.R = R;
        TwoBumpField const U(limit.w, c);
        auto const grid = U.grid();
        auto const est = two_bump_integrals(U, model.nl, grid, false);
        auto const m = two_bump_moments(U, model.nl, grid, &est.value);
        auto const pr = project(m, model.potential(), model.nl);
        double const bary = pr.s_star * est.value.crit_moment / est.value.crit_norm;
        cands.push_back({tagged("translated bump R=", R), pr.projected_energy,
                         std::sqrt(pr.report.grad_norm_sq), std::abs(bary), R});
    }
    double const rho = rho_bound(cfg.N, model.nl.A2());
    return level_diagnostics(limit.p0, rho, std::move(cands), landscape, cfg.delta_fraction * limit.p0,
                             1e-3 * limit.p0);
}

} // namespace pohozaev
