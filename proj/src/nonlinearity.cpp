#include "pohozaev/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

namespace {

// geometric panels beyond the uniform part of the primitive table
constexpr double kPanelRatio = 1.02;
constexpr double kTableEnd = 1e8;

GaussRule const& panel_rule()
{
    static GaussRule const rule = gauss_legendre(8);
    return rule;
}

double gauss_on(std::function<double(double)> const& f, double a, double b)
{
    auto const& rule = panel_rule();
    double const c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    }
    return sum * h;
}

} // namespace

PrimitiveTable::PrimitiveTable(std::function<double(double)> f, double panel_width, double s_cap)
    : f_(std::move(f))
    , h_(panel_width)
    , cap_(s_cap)
{
    int const uniform = static_cast<int>(std::ceil(cap_ / h_));
    cap_ = uniform * h_;
    int const geometric = static_cast<int>(std::ceil(std::log(kTableEnd / cap_) / std::log(kPanelRatio)));
    cumulative_.resize(uniform + geometric + 1);
    cumulative_[0] = 0.0;
    CompensatedSum acc;
    for (int k = 0; k < uniform + geometric; ++k) {
        double a, b;
        if (k < uniform) {
            a = k * h_;
            b = (k + 1) * h_;
        } else {
            a = cap_ * std::pow(kPanelRatio, k - uniform);
            b = a * kPanelRatio;
        }
        acc += integrate_adaptive(f_, a, b, 1e-300, 1e-14, 200).value;
        cumulative_[k + 1] = acc.value();
    }
}

double PrimitiveTable::operator()(double s) const
{
    if (s <= 0.0) {
        return 0.0;
    }
    int const uniform = static_cast<int>(std::lround(cap_ / h_));
    if (s <= cap_) {
        int k = std::min(static_cast<int>(s / h_), uniform - 1);
        return cumulative_[k] + gauss_on(f_, k * h_, s);
    }
    int const last = static_cast<int>(cumulative_.size()) - 1;
    int k = static_cast<int>(std::log(s / cap_) / std::log(kPanelRatio));
    if (uniform + k >= last) {
        double const end = cap_ * std::pow(kPanelRatio, last - uniform);
        return cumulative_[last] + integrate_adaptive(f_, end, s, 1e-300, 1e-12).value;
    }
    double const a = cap_ * std::pow(kPanelRatio, k);
    return cumulative_[uniform + k] + gauss_on(f_, a, s);
}

Nonlinearity::Nonlinearity(Parts parts)
    : name_(std::move(parts.name))
    , dimension_(parts.dimension)
    , f_(std::move(parts.f))
    , fprime_(std::move(parts.fprime))
    , primitive_(std::move(parts.primitive))
    , ell_(parts.ell)
{
    if (dimension_ < 3) {
        throw ConfigError("dimension must be at least 3, got " + std::to_string(dimension_));
    }
    if (!f_) {
        throw ConfigError("nonlinearity '" + name_ + "' has no evaluator");
    }
    if (!fprime_) {
        fprime_ = [f = f_](double s) {
            double const h = std::abs(s) * 1e-6 + 1e-12;
            return (f(s + h) - f(s - h)) / (2.0 * h);
        };
    }
    if (!primitive_) {
        table_ = std::make_shared<PrimitiveTable const>(f_, 1.0 / 64.0, 16.0);
    }

    gamma_numeric_ = locate_first_zero(f_, fprime_, 1e6);
    gamma_ = gamma_numeric_;
    if (std::isfinite(parts.gamma_exact)) {
        if (!(std::abs(gamma_numeric_ - parts.gamma_exact) <= 1e-9 * parts.gamma_exact)) {
            throw NumericalError("zero of f located at " + std::to_string(gamma_numeric_) +
                                 " disagrees with stored value " + std::to_string(parts.gamma_exact));
        }
        gamma_ = parts.gamma_exact;
    }

    double const crit = critical_exponent();
    double a2 = 0.0;
    for (double ls = -4.0; ls <= 4.0; ls += 0.01) {
        double const s = std::pow(10.0, ls);
        a2 = std::max({a2, std::abs(F(s)) / std::pow(s, crit), std::abs(f(s)) / std::pow(s, crit - 1.0),
                       std::abs(fprime(s)) / std::pow(s, crit - 2.0)});
    }
    A2_ = a2;
}

double Nonlinearity::f(double s) const
{
    return s < 0.0 ? -f_(-s) : f_(s);
}

double Nonlinearity::F(double s) const
{
    double const a = std::abs(s);
    return primitive_ ? primitive_(a) : (*table_)(a);
}

double Nonlinearity::fprime(double s) const
{
    return fprime_(std::abs(s));
}

double locate_first_zero(std::function<double(double)> const& f, std::function<double(double)> const& fprime,
                         double s_max, double tol)
{
    constexpr int per_decade = 400;
    double const lo = 1e-4;
    int const n = static_cast<int>(std::ceil(std::log10(s_max / lo) * per_decade));
    auto node = [&](int i) { return lo * std::pow(10.0, static_cast<double>(i) / per_decade); };

    double prev2 = f(node(0)), prev = f(node(1));
    if (prev2 <= 0.0) {
        return node(0);
    }
    double fmax = std::max(prev2, prev);
    for (int i = 2; i <= n; ++i) {
        double const s = node(i);
        double const cur = f(s);
        if (prev <= 0.0 || cur <= 0.0) {
            // sign change inside [s_{i-1}, s_i] (or at the left node)
            double a = node(i - 1), b = s;
            if (prev <= 0.0) {
                a = node(i - 2);
                b = node(i - 1);
            }
            while (b - a > tol * std::max(1.0, a)) {
                double const m = 0.5 * (a + b);
                (f(m) > 0.0 ? a : b) = m;
            }
            return 0.5 * (a + b);
        }
        if (prev < prev2 && prev <= cur) {
            // interior local minimum: a touching zero shows up as a sign change of f'
            double a = node(i - 2), b = s;
            if (fprime(a) < 0.0 && fprime(b) > 0.0) {
                while (b - a > tol * std::max(1.0, a)) {
                    double const m = 0.5 * (a + b);
                    (fprime(m) < 0.0 ? a : b) = m;
                }
                double const root = 0.5 * (a + b);
                if (std::abs(f(root)) <= 1e-12 * fmax) {
                    return root;
                }
            }
        }
        fmax = std::max(fmax, cur);
        prev2 = prev;
        prev = cur;
    }
    return std::numeric_limits<double>::infinity();
}

Nonlinearity builtin_model(BuiltinModel model)
{
    Nonlinearity::Parts parts;
    parts.dimension = 3;
    switch (model) {
    case BuiltinModel::rational_asymlinear: {
        double const r2 = std::numbers::sqrt2;
        parts.name = "rational_asymlinear";
        // 2 s^7 (s^2 - sqrt2)^2 / (s^10 + 1), written in 1/s for large arguments
        parts.f = [r2](double s) {
            if (s <= 1.0) {
                double const s2 = s * s;
                double const s7 = s2 * s2 * s2 * s;
                double const d = s2 - r2;
                return 2.0 * s7 * d * d / (s2 * s2 * s2 * s2 * s2 + 1.0);
            }
            double const t = 1.0 / s, t2 = t * t;
            double const d = 1.0 - r2 * t2;
            return 2.0 * s * d * d / (1.0 + t2 * t2 * t2 * t2 * t2);
        };
        parts.fprime = [r2, f = parts.f](double s) {
            if (s <= 1.0) {
                double const s2 = s * s, s4 = s2 * s2, s6 = s4 * s2, s8 = s4 * s4, s10 = s8 * s2;
                double const q = s10 + 1.0;
                double const dp = 22.0 * s10 - 36.0 * r2 * s8 + 28.0 * s6;
                return dp / q - f(s) * 10.0 * s8 * s / q;
            }
            double const t = 1.0 / s, t2 = t * t, t4 = t2 * t2, t10 = t4 * t4 * t2;
            double const q = 1.0 + t10;
            return (22.0 - 36.0 * r2 * t2 + 28.0 * t4) / q - f(s) * 10.0 * t / q;
        };
        parts.ell = 2.0;
        parts.gamma_exact = std::pow(2.0, 0.25);
        break;
    }
    case BuiltinModel::sine_superlinear:
        parts.name = "sine_superlinear";
        parts.f = [](double s) {
            double const s7 = std::pow(s, 7);
            return s7 * (1.0 - std::sin(s)) / (1.0 + s * s * s * s);
        };
        parts.fprime = [](double s) {
            double const s3 = s * s * s, s6 = s3 * s3, s7 = s6 * s;
            double const q = 1.0 + s3 * s;
            double const one_minus = 1.0 - std::sin(s);
            return (7.0 * s6 * one_minus - s7 * std::cos(s)) / q - s7 * one_minus * 4.0 * s3 / (q * q);
        };
        // f(s)/s grows like s^2 away from the zeros of 1 - sin s
        parts.ell = std::numeric_limits<double>::infinity();
        parts.gamma_exact = std::numbers::pi / 2.0;
        break;
    }
    return Nonlinearity(std::move(parts));
}

Nonlinearity builtin_model(std::string const& name)
{
    if (name == "rational_asymlinear") {
        return builtin_model(BuiltinModel::rational_asymlinear);
    }
    if (name == "sine_superlinear") {
        return builtin_model(BuiltinModel::sine_superlinear);
    }
    throw ConfigError("unknown nonlinearity model '" + name + "'");
}

Nonlinearity power_model(double p, int dimension)
{
    if (!(p > 1.0)) {
        throw ConfigError("power model needs p > 1");
    }
    Nonlinearity::Parts parts;
    std::ostringstream name;
    name << "power(p=" << p << ")";
    parts.name = name.str();
    parts.dimension = dimension;
    parts.f = [p](double s) { return std::pow(s, p - 1.0); };
    parts.fprime = [p](double s) { return (p - 1.0) * std::pow(s, p - 2.0); };
    parts.primitive = [p](double s) { return std::pow(s, p) / p; };
    parts.ell = p > 2.0 ? std::numeric_limits<double>::infinity() : (p == 2.0 ? 1.0 : 0.0);
    return Nonlinearity(std::move(parts));
}

Nonlinearity custom_model(std::string name, int dimension, std::function<double(double)> f,
                          std::function<double(double)> fprime)
{
    Nonlinearity::Parts parts;
    parts.name = std::move(name);
    parts.dimension = dimension;
    parts.f = std::move(f);
    parts.fprime = std::move(fprime);
    double const big = 1e6;
    parts.ell = parts.f(big) / big;
    return Nonlinearity(std::move(parts));
}

namespace {

// Fritsch-Carlson monotone cubic
struct MonotoneCubic
{
    std::vector<double> x, y, d;

    MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
        : x(std::move(xs))
        , y(std::move(ys))
        , d(x.size(), 0.0)
    {
        std::size_t const n = x.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        d[0] = delta[0];
        d[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            d[i] = delta[i - 1] * delta[i] <= 0.0 ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                d[i] = d[i + 1] = 0.0;
                continue;
            }
            double const a = d[i] / delta[i], b = d[i + 1] / delta[i];
            double const h = a * a + b * b;
            if (h > 9.0) {
                double const t = 3.0 / std::sqrt(h);
                d[i] = t * a * delta[i];
                d[i + 1] = t * b * delta[i];
            }
        }
    }

    std::size_t segment(double s) const
    {
        auto it = std::upper_bound(x.begin(), x.end(), s);
        std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
        return std::min(i, x.size() - 2);
    }

    double value(double s) const
    {
        std::size_t const i = segment(s);
        double const h = x[i + 1] - x[i], t = (s - x[i]) / h;
        double const t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * y[i + 1] +
               (t3 - t2) * h * d[i + 1];
    }

    double derivative(double s) const
    {
        std::size_t const i = segment(s);
        double const h = x[i + 1] - x[i], t = (s - x[i]) / h;
        double const t2 = t * t;
        return ((6 * t2 - 6 * t) * y[i] + (6 * t - 6 * t2) * y[i + 1]) / h + (3 * t2 - 4 * t + 1) * d[i] +
               (3 * t2 - 2 * t) * d[i + 1];
    }
};

} // namespace

Nonlinearity table_model(std::string name, int dimension, std::vector<double> s, std::vector<double> fs)
{
    if (s.size() < 3 || s.size() != fs.size()) {
        throw ConfigError("nonlinearity table needs at least three (s, f) rows");
    }
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw ConfigError("nonlinearity table abscissae must be strictly increasing");
    }
    if (s.front() != 0.0) {
        s.insert(s.begin(), 0.0);
        fs.insert(fs.begin(), 0.0);
    }
    auto cubic = std::make_shared<MonotoneCubic const>(s, fs);
    double const s_last = s.back(), f_last = fs.back();
    Nonlinearity::Parts parts;
    parts.name = std::move(name);
    parts.dimension = dimension;
    parts.f = [cubic, s_last, f_last](double x) { return x <= s_last ? cubic->value(x) : f_last * x / s_last; };
    parts.fprime = [cubic, s_last, f_last](double x) {
        return x <= s_last ? cubic->derivative(x) : f_last / s_last;
    };
    parts.ell = f_last / s_last;
    return Nonlinearity(std::move(parts));
}

Nonlinearity table_model_from_file(std::string const& path, int dimension)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open nonlinearity table '" + path + "'");
    }
    std::vector<double> s, fs;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream row(line);
        double a, b;
        if (row >> a >> b) {
            s.push_back(a);
            fs.push_back(b);
        }
    }
    return table_model("table:" + path, dimension, std::move(s), std::move(fs));
}

double eval_g(Nonlinearity const& nl, double s)
{
    if (!(s > 0.0)) {
        throw DomainError("g(s) needs s > 0");
    }
    double const fs = nl.f(s);
    if (std::abs(fs) < std::numeric_limits<double>::min() ||
        (std::isfinite(nl.gamma()) && std::abs(s - nl.gamma()) < 1e-12 * nl.gamma())) {
        throw DomainError("g(s) undefined where f(s) = 0 (s = " + std::to_string(s) + ")");
    }
    return s * nl.fprime(s) / fs;
}

HypothesisReport check_f_hypotheses(Nonlinearity const& nl, SamplingSpec const& grid, double tol)
{
    HypothesisReport report;
    double const crit = nl.critical_exponent();
    int const n = static_cast<int>(std::ceil(std::log10(grid.s_max / grid.s_min) * grid.points_per_decade)) + 1;
    std::vector<double> s(n), f(n), ratio(n);
    for (int i = 0; i < n; ++i) {
        s[i] = grid.s_min * std::pow(10.0, static_cast<double>(i) / grid.points_per_decade);
        f[i] = nl.f(s[i]);
        ratio[i] = f[i] / std::pow(s[i], crit - 1.0);
    }

    // (f1): sign, growth constant, primitive consistency, oddness
    double fmin = *std::min_element(f.begin(), f.end());
    double a2 = 0.0;
    double prim_err = 0.0;
    double odd_err = 0.0;
    for (int i = 0; i < n; ++i) {
        double const Fs = nl.F(s[i]);
        a2 = std::max({a2, std::abs(Fs) / std::pow(s[i], crit), std::abs(f[i]) / std::pow(s[i], crit - 1.0),
                       std::abs(nl.fprime(s[i])) / std::pow(s[i], crit - 2.0)});
        odd_err = std::max(odd_err, std::abs(nl.f(-s[i]) + f[i]));
        if (s[i] > 1e-3 && s[i] < 1e3) {
            double const h = 1e-4 * s[i];
            double const dF = (nl.F(s[i] + h) - nl.F(s[i] - h)) / (2.0 * h);
            double const scale = std::max(std::abs(f[i]), std::abs(nl.F(s[i])) / s[i]) + 1e-300;
            prim_err = std::max(prim_err, std::abs(dF - f[i]) / scale);
        }
    }
    report.add("f1_nonnegative", fmin, -tol, fmin >= -tol, "min f on the grid");
    report.add("f1_growth_A2", a2, std::numeric_limits<double>::infinity(), std::isfinite(a2),
               "fitted A2 with |F| <= A2 s^2*, |f| <= A2 s^(2*-1), |f'| <= A2 s^(2*-2)");
    report.add("f1_primitive_consistency", prim_err, 1e-6, prim_err <= 1e-6,
               "max relative |F'(s) - f(s)| by central differences");
    report.add("f1_odd_extension", odd_err, 0.0, odd_err == 0.0, "max |f(-s) + f(s)|");

    // (f2): vanishing ratio at both ends, certified by decay of the per-decade maximum
    int const decade = grid.points_per_decade;
    auto range_max = [&](int from, int to) {
        double m = 0.0;
        for (int i = std::max(from, 0); i < std::min(to, n); ++i) {
            m = std::max(m, std::abs(ratio[i]));
        }
        return m;
    };
    double const zero_last = range_max(0, decade), zero_prev = range_max(decade, 2 * decade);
    bool const zero_ok = zero_last < tol && zero_last <= zero_prev;
    report.add("f2_limit_at_zero", zero_last, tol, zero_ok, "max f/s^(2*-1) over the first decade");
    double const inf_last = range_max(n - decade, n), inf_prev = range_max(n - 2 * decade, n - decade);
    bool const inf_ok = inf_last < tol && inf_last <= inf_prev;
    report.add("f2_limit_at_infinity", inf_last, tol, inf_ok, "max f/s^(2*-1) over the last decade");
    double liminf = std::numeric_limits<double>::infinity();
    for (int i = n - decade; i < n; ++i) {
        liminf = std::min(liminf, f[i] / s[i]);
    }
    report.add("f2_asymptotic_slope", liminf, tol, liminf > tol, "min f(s)/s over the last decade (estimate of l)");

    // (f3): g non-increasing on (0, gamma) and the endpoint ordering
    double const gamma = nl.gamma();
    int violations = 0;
    double prev_g = std::numeric_limits<double>::infinity();
    int sampled = 0;
    for (int i = 0; i < n && s[i] < gamma * (1.0 - 1e-6); ++i) {
        if (!(f[i] > 0.0)) {
            continue;
        }
        double const g = s[i] * nl.fprime(s[i]) / f[i];
        if (g > prev_g + tol * std::max(1.0, std::abs(prev_g))) {
            ++violations;
        }
        prev_g = g;
        ++sampled;
    }
    report.add("f3_g_monotone", violations, 0.0, violations == 0 && sampled > 1,
               "count of grid increases of g on (0, gamma)");
    auto g_at = [&](double x) {
        double const fx = nl.f(x);
        return fx > 0.0 ? x * nl.fprime(x) / fx : std::numeric_limits<double>::quiet_NaN();
    };
    double const g_zero = g_at(grid.s_min), g_inf = g_at(grid.s_max);
    bool const endpoint_ok = g_inf < crit - 1.0 && crit - 1.0 < g_zero;
    report.add("f3_endpoint_order", crit - 1.0, g_zero, endpoint_ok,
               "g(s_max) = " + std::to_string(g_inf) + " < 2*-1 < g(s_min) = " + std::to_string(g_zero));
    return report;
}

} // namespace pohozaev
