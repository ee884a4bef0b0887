#include "pohozaev/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pohozaev/errors.hpp"

namespace pohozaev {

namespace {

nlohmann::json num(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v > 0 ? "inf" : "-inf";
}

std::ofstream open_out(std::string const& path)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    return out;
}

} // namespace

std::vector<std::pair<std::string, std::string>> module_versions()
{
    return {{"nonlinearity", "1.0"}, {"potential", "1.0"},          {"limit_problem", "1.0"},
            {"fields", "1.0"},       {"functionals", "1.0"},        {"two_bump", "1.0"},
            {"projection", "1.0"},   {"bound_state_search", "1.1"}, {"cli", "1.0"}};
}

ArtifactHeader ArtifactHeader::make(std::string kind, RunConfig const& cfg)
{
    return {std::move(kind), cfg.hash()};
}

nlohmann::json ArtifactHeader::to_json() const
{
    nlohmann::json v = nlohmann::json::object();
    for (auto const& [m, ver] : module_versions()) {
        v[m] = ver;
    }
    return {{"kind", kind}, {"config_hash", config_hash}, {"module_versions", v}};
}

std::string format_real(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::string const& path, ArtifactHeader const& header, CsvTable const& table)
{
    auto out = open_out(path);
    out << "# kind: " << header.kind << "\n# config_hash: " << header.config_hash << "\n# module_versions:";
    for (auto const& [m, v] : module_versions()) {
        out << ' ' << m << '=' << v;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (auto const& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            std::visit(
                [&](auto const& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_real(c);
                    } else {
                        out << c;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

void write_json(std::string const& path, ArtifactHeader const& header, nlohmann::json const& payload)
{
    auto out = open_out(path);
    nlohmann::json doc = {{"header", header.to_json()}, {"data", payload}};
    out << doc.dump(2) << '\n';
}

nlohmann::json read_json(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    try {
        auto doc = nlohmann::json::parse(in);
        return doc.at("data");
    } catch (nlohmann::json::exception const& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

nlohmann::json to_json(EnergyReport const& r)
{
    return {{"I_V", num(r.I_V)},
            {"I_0", num(r.I_0)},
            {"J_V", num(r.J_V)},
            {"J_0", num(r.J_0)},
            {"grad_norm_sq", num(r.grad_norm_sq)},
            {"V_quadratic", num(r.V_quadratic)},
            {"gradV_quadratic", num(r.gradV_quadratic)},
            {"F_integral", num(r.F_integral)},
            {"residual_norm", num(r.residual_norm)},
            {"rho_bound", num(r.rho_bound)}};
}

nlohmann::json to_json(ExponentFit const& f)
{
    return {{"slope", num(f.slope)},
            {"intercept", num(f.intercept)},
            {"band95", num(f.band95)},
            {"predicted_exponent", num(f.predicted_exponent)},
            {"R", f.R},
            {"values", f.values},
            {"errors", f.errors}};
}

nlohmann::json to_json(LineFit const& f)
{
    return {{"slope", num(f.slope)},
            {"intercept", num(f.intercept)},
            {"slope_stderr", num(f.slope_stderr)},
            {"band95", num(f.band95)},
            {"points", f.points}};
}

nlohmann::json to_json(InteractionReport const& r)
{
    return {{"lambda", r.lambda},
            {"mixed_powers", {r.powers.a, r.powers.b}},
            {"epsilon_fit", to_json(r.epsilon_fit)},
            {"gradient_fit", to_json(r.grad_fit)},
            {"mixed_fit", to_json(r.mixed_fit)},
            {"cross_fit", to_json(r.cross_fit)},
            {"ratio_decreasing", r.ratio_decreasing}};
}

nlohmann::json to_json(AcpReport const& r)
{
    return {{"sigma", num(r.sigma)},
            {"C5", num(r.C5)},
            {"C6", num(r.C6)},
            {"holdout_f_ratio", num(r.holdout_f_ratio)},
            {"holdout_F_ratio", num(r.holdout_F_ratio)},
            {"pass", r.pass}};
}

nlohmann::json to_json(ProjectionResult const& r)
{
    nlohmann::json samples = nlohmann::json::array();
    for (auto const& x : r.xi_values) {
        samples.push_back({num(x.s), num(x.value), num(x.derivative)});
    }
    return {{"s_star", num(r.s_star)},
            {"bracket", {num(r.bracket.first), num(r.bracket.second)}},
            {"unique", r.unique},
            {"projected_energy", num(r.projected_energy)},
            {"iterations", r.iterations},
            {"report", to_json(r.report)},
            {"xi_samples", samples}};
}

nlohmann::json to_json(LandscapeReport const& r)
{
    return {{"R", r.R},
            {"p0", num(r.p0)},
            {"rho", num(r.rho)},
            {"max_energy", num(r.max_energy)},
            {"eta", num(r.eta)},
            {"endpoint_max", num(r.endpoint_max)},
            {"all_above_rho", r.all_above_rho},
            {"cells", r.cells.size()}};
}

nlohmann::json to_json(LevelReport const& r)
{
    nlohmann::json cands = nlohmann::json::array();
    for (auto const& c : r.candidates) {
        cands.push_back({{"source", c.source},
                         {"energy", num(c.energy)},
                         {"grad_norm", num(c.grad_norm)},
                         {"barycenter_norm", num(c.barycenter_norm)},
                         {"R", num(c.R)}});
    }
    return {{"p0", num(r.p0)},
            {"pV_upper", num(r.pV_upper)},
            {"landscape_max", num(r.landscape_max)},
            {"eta", num(r.eta)},
            {"endpoint_max", num(r.endpoint_max)},
            {"delta", num(r.delta)},
            {"rho", num(r.rho)},
            {"checks",
             {{"pV_below_p0", r.pV_below_p0},
              {"low_energy_off_center", r.low_energy_off_center},
              {"all_above_rho", r.all_above_rho},
              {"landscape_below_2p0", r.landscape_below_2p0}}},
            {"candidates", cands}};
}

nlohmann::json to_json(RadialProfile const& w)
{
    return {{"N", w.dimension()},
            {"sup_norm", num(w.sup_norm())},
            {"r_max", num(w.r_max())},
            {"decay_exponent", num(w.decay_exponent)},
            {"gradient_decay_exponent", num(w.gradient_decay_exponent)},
            {"tail_coefficient", num(w.tail_coefficient)},
            {"A4", num(w.A4)},
            {"A5", num(w.A5)},
            {"A6", num(w.A6)},
            {"plateau_statistic", num(w.plateau_statistic)},
            {"ode_residual", num(w.ode_residual)}};
}

CsvTable profile_table(RadialProfile const& w)
{
    CsvTable t{{"r", "w", "dw"}, {}};
    for (std::size_t i = 0; i < w.size(); ++i) {
        t.rows.push_back({w.node(i), w.values()[i], w.derivatives()[i]});
    }
    return t;
}

CsvTable interaction_table(InteractionReport const& r)
{
    CsvTable t{{"R", "epsilon", "epsilon_error", "grad_cross", "grad_cross_error", "mixed_power", "mixed_power_error",
                "cross_term", "cross_term_error", "ratio", "identity_gap", "envelope_used"},
               {}};
    for (auto const& row : r.rows) {
        t.rows.push_back({row.R, row.epsilon, row.epsilon_error, row.grad_cross, row.grad_cross_error, row.mixed_power,
                          row.mixed_power_error, row.cross_term, row.cross_term_error, row.ratio, row.identity_gap,
                          std::int64_t{row.envelope_used}});
    }
    return t;
}

CsvTable exponent_table(ExponentFit const& f)
{
    CsvTable t{{"R", "value", "error_estimate"}, {}};
    for (std::size_t i = 0; i < f.R.size(); ++i) {
        t.rows.push_back({f.R[i], f.values[i], f.errors[i]});
    }
    return t;
}

CsvTable landscape_table(LandscapeReport const& r)
{
    CsvTable t{{"lambda", "y_tag", "ok", "s_star", "energy", "grad_norm", "unique_flag", "barycenter", "error"}, {}};
    for (auto const& c : r.cells) {
        t.rows.push_back({c.lambda, c.y_tag, std::int64_t{c.ok}, c.s_star, c.energy, c.grad_norm, std::int64_t{c.unique},
                          c.barycenter, c.error.empty() ? std::string("-") : '"' + c.error + '"'});
    }
    return t;
}

CsvTable history_table(SearchState const& s)
{
    CsvTable t{{"iteration", "energy", "residual", "barycenter", "s", "tau", "J_V"}, {}};
    for (auto const& h : s.history) {
        t.rows.push_back({std::int64_t{h.iteration}, h.energy, h.residual, h.barycenter, h.s, h.tau, h.J_V});
    }
    return t;
}

CsvTable field_table(NodalField const& u)
{
    auto const& g = *u.grid;
    CsvTable t{{"z", "rho", "u"}, {}};
    t.rows.reserve(g.size());
    for (std::size_t j = 0; j < g.nz(); ++j) {
        for (std::size_t l = 0; l < g.nrho(); ++l) {
            t.rows.push_back({u.s * g.z()[j], u.s * g.rho()[l], u.u[g.index(j, l)]});
        }
    }
    return t;
}

} // namespace pohozaev
