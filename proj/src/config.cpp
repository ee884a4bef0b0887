#include "pohozaev/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "pohozaev/errors.hpp"
#include "pohozaev/two_bump.hpp"

namespace pohozaev {

namespace {

std::string trim(std::string const& s)
{
    auto const b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    auto const e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string const& key, std::string const& v)
{
    double out = 0.0;
    auto const* end = v.data() + v.size();
    auto const [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return out;
}

long long to_integer(std::string const& key, std::string const& v)
{
    long long out = 0;
    auto const* end = v.data() + v.size();
    auto const [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(std::string const& key, std::string const& v)
{
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(std::string const& key, std::string const& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(to_double(key, item));
        }
    }
    return out;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string fmt(std::vector<double> const& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + fmt(xs[i]);
    }
    return out;
}

struct Field
{
    std::function<void(RunConfig&, std::string const&, std::string const&)> set;
    std::function<std::string(RunConfig const&)> get;
};

template <class T>
Field number(T RunConfig::*m)
{
    return {[m](RunConfig& c, std::string const& k, std::string const& v) {
                if constexpr (std::is_floating_point_v<T>) {
                    c.*m = to_double(k, v);
                } else {
                    c.*m = static_cast<T>(to_integer(k, v));
                }
            },
            [m](RunConfig const& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return fmt(c.*m);
                } else {
                    return std::to_string(c.*m);
                }
            }};
}

Field text(std::string RunConfig::*m)
{
    return {[m](RunConfig& c, std::string const&, std::string const& v) { c.*m = v; },
            [m](RunConfig const& c) { return c.*m; }};
}

Field flag(bool RunConfig::*m)
{
    return {[m](RunConfig& c, std::string const& k, std::string const& v) { c.*m = to_bool(k, v); },
            [m](RunConfig const& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field list(std::vector<double> RunConfig::*m)
{
    return {[m](RunConfig& c, std::string const& k, std::string const& v) { c.*m = to_list(k, v); },
            [m](RunConfig const& c) { return fmt(c.*m); }};
}

std::map<std::string, Field> const& fields()
{
    static std::map<std::string, Field> const table = {
        {"dimension", number(&RunConfig::N)},
        {"nonlinearity.model", text(&RunConfig::nonlinearity)},
        {"nonlinearity.power", number(&RunConfig::power)},
        {"nonlinearity.table", text(&RunConfig::table_path)},
        {"potential.kind", text(&RunConfig::potential_kind)},
        {"potential.k", number(&RunConfig::potential_k)},
        {"potential.scale", number(&RunConfig::potential_scale)},
        {"limit.tol", number(&RunConfig::limit_tol)},
        {"limit.r_max", number(&RunConfig::limit_r_max)},
        {"scan.R", list(&RunConfig::R_scan)},
        {"scan.lambda", number(&RunConfig::scan_lambda)},
        {"scan.mixed_alpha", number(&RunConfig::mixed_alpha)},
        {"scan.mixed_beta", number(&RunConfig::mixed_beta)},
        {"scan.acp_C5", number(&RunConfig::acp_C5)},
        {"geometry.y", text(&RunConfig::y_geometry)},
        {"geometry.y_custom", list(&RunConfig::y_custom)},
        {"projection.lo", number(&RunConfig::projection_lo)},
        {"projection.hi", number(&RunConfig::projection_hi)},
        {"projection.tol", number(&RunConfig::projection_tol)},
        {"landscape.R", number(&RunConfig::landscape_R)},
        {"landscape.lambda_points", number(&RunConfig::lambda_points)},
        {"landscape.delta_fraction", number(&RunConfig::delta_fraction)},
        {"search.tol_r", number(&RunConfig::search_tol_r)},
        {"search.tol_e", number(&RunConfig::search_tol_e)},
        {"search.max_iter", number(&RunConfig::search_max_iter)},
        {"search.radius", number(&RunConfig::search_radius)},
        {"search.spacing", number(&RunConfig::search_spacing)},
        {"search.growth", number(&RunConfig::search_growth)},
        {"search.R", number(&RunConfig::search_R)},
        {"search.lambda", number(&RunConfig::search_lambda)},
        {"search.reflection", flag(&RunConfig::search_reflection)},
        {"search.asymmetric", flag(&RunConfig::search_asymmetric)},
        {"search.descent", text(&RunConfig::search_descent)},
        {"search.translation_R", list(&RunConfig::translation_R)},
        {"mc.samples", number(&RunConfig::mc_samples)},
        {"seed", number(&RunConfig::seed)},
        {"output.dir", text(&RunConfig::out_dir)},
    };
    return table;
}

} // namespace

RunConfig RunConfig::parse(std::string const& text)
{
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto const hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        if (!section.empty()) {
            key = section + "." + key;
        }
        cfg.set(key, trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void RunConfig::set(std::string const& key, std::string const& value)
{
    auto const it = fields().find(key);
    if (it == fields().end()) {
        throw ConfigError("unknown key '" + key + "'");
    }
    it->second.set(*this, key, value);
}

void RunConfig::validate() const
{
    if (N < 3) {
        throw ConfigError("dimension must be at least 3");
    }
    auto const positive = [](char const* name, double v) {
        if (!(v > 0.0)) {
            throw ConfigError(std::string(name) + " must be positive");
        }
    };
    positive("limit.tol", limit_tol);
    positive("limit.r_max", limit_r_max);
    positive("projection.tol", projection_tol);
    positive("search.tol_r", search_tol_r);
    positive("search.tol_e", search_tol_e);
    positive("search.radius", search_radius);
    positive("search.spacing", search_spacing);
    positive("search.growth", search_growth);
    positive("landscape.delta_fraction", delta_fraction);
    if (!(projection_lo > 0.0 && projection_lo < projection_hi)) {
        throw ConfigError("projection bracket must satisfy 0 < lo < hi");
    }
    if (R_scan.empty()) {
        throw ConfigError("scan.R is empty");
    }
    if (!std::is_sorted(R_scan.begin(), R_scan.end()) ||
        std::adjacent_find(R_scan.begin(), R_scan.end()) != R_scan.end()) {
        throw ConfigError("scan.R must be strictly ascending");
    }
    if (R_scan.front() < 1.0) {
        throw ConfigError("scan.R values must be at least 1");
    }
    if (!(scan_lambda > 0.0 && scan_lambda < 1.0)) {
        throw ConfigError("scan.lambda must lie in (0, 1)");
    }
    if (!(search_lambda >= 0.0 && search_lambda <= 1.0)) {
        throw ConfigError("search.lambda must lie in [0, 1]");
    }
    if (lambda_points < 2) {
        throw ConfigError("landscape.lambda_points must be at least 2");
    }
    if (landscape_R < 1.0 || search_R < 1.0) {
        throw ConfigError("separations must be at least 1");
    }
    if (search_max_iter < 1 || mc_samples < 1) {
        throw ConfigError("iteration and sample counts must be positive");
    }
    if (nonlinearity != "rational_asymlinear" && nonlinearity != "sine_superlinear" && nonlinearity != "power" &&
        nonlinearity != "table") {
        throw ConfigError("unknown nonlinearity model '" + nonlinearity + "'");
    }
    if (nonlinearity == "table" && table_path.empty()) {
        throw ConfigError("nonlinearity.table is required for the table model");
    }
    if (potential_kind != "model" && potential_kind != "none") {
        throw ConfigError("potential.kind must be model or none");
    }
    if (potential_kind == "model") {
        double const kmin = std::max(2.0, N - 2.0);
        if (!(potential_k > kmin)) {
            std::ostringstream msg;
            msg << "potential.k = " << potential_k << " violates k > max{2, N-2} = " << kmin;
            throw ConfigError(msg.str());
        }
        positive("potential.scale", potential_scale);
    }
    if (y_geometry != "collinear" && y_geometry != "perpendicular" && y_geometry != "custom") {
        throw ConfigError("geometry.y must be collinear, perpendicular or custom");
    }
    if (y_geometry == "custom" && y_custom.size() != static_cast<std::size_t>(N)) {
        throw ConfigError("geometry.y_custom needs N coordinates");
    }
    if (search_descent != "sobolev" && search_descent != "plain") {
        throw ConfigError("search.descent must be sobolev or plain");
    }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (auto const& [k, f] : fields()) {
        out.emplace_back(k, f.get(*this));
    }
    return out;
}

std::string RunConfig::canonical() const
{
    std::string out;
    for (auto const& [k, v] : entries()) {
        out += k + " = " + v + "\n";
    }
    return out;
}

std::string RunConfig::hash() const
{
    // the output location does not change any result
    RunConfig c = *this;
    c.out_dir.clear();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : c.canonical()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::vector<double> RunConfig::y0() const
{
    std::vector<double> e(N, 0.0);
    e[0] = 1.0;
    return e;
}

std::vector<double> RunConfig::y() const
{
    auto const e = y0();
    if (y_geometry == "perpendicular") {
        return perpendicular_partner(e);
    }
    if (y_geometry == "custom") {
        return y_custom;
    }
    return collinear_partner(e);
}

std::vector<double> RunConfig::lambda_grid() const
{
    std::vector<double> out;
    for (int i = 0; i < lambda_points; ++i) {
        out.push_back(static_cast<double>(i) / (lambda_points - 1));
    }
    return out;
}

} // namespace pohozaev
