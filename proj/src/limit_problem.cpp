#include "pohozaev/limit_problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "pohozaev/quadrature.hpp"

namespace pohozaev {

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

RadialProfile::RadialProfile(int N, double r_min, double log_step, std::vector<double> w, std::vector<double> dw,
                             std::vector<double> d2w)
    : N_(N)
    , r_min_(r_min)
    , h_(log_step)
    , w_(std::move(w))
    , dw_(std::move(dw))
    , d2w_(std::move(d2w))
{
}

double RadialProfile::node(std::size_t i) const
{
    return i == 0 ? 0.0 : r_min_ * std::exp(h_ * static_cast<double>(i - 1));
}

std::size_t RadialProfile::interval(double r) const
{
    if (r < r_min_) {
        return 0;
    }
    auto i = static_cast<std::size_t>(std::log(r / r_min_) / h_) + 1;
    // guard the floor against rounding at node positions
    if (i + 1 < w_.size() && node(i + 1) <= r) {
        ++i;
    } else if (i > 1 && node(i) > r) {
        --i;
    }
    return std::min(i, w_.size() - 2);
}

std::pair<double, double> RadialProfile::value_and_derivative(double r) const
{
    r = std::abs(r);
    double const rmax = r_max();
    if (r >= rmax) {
        double const p = N_ - 2.0;
        double const v = tail_coefficient * std::pow(r, -p);
        return {v, -p * v / r};
    }
    std::size_t const i = interval(r);
    double const x0 = node(i), x1 = node(i + 1);
    double const h = x1 - x0, t = (r - x0) / h;
    double const t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double const H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double const H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double const H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    double const H3 = 0.5 * t3 - t4 + 0.5 * t5;
    double const H4 = -4 * t3 + 7 * t4 - 3 * t5;
    double const H5 = 10 * t3 - 15 * t4 + 6 * t5;
    double const dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    double const dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double const dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    double const dH3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    double const dH4 = -12 * t2 + 28 * t3 - 15 * t4;
    double const dH5 = 30 * t2 - 60 * t3 + 30 * t4;
    double const a0 = w_[i], a1 = h * dw_[i], a2 = h * h * d2w_[i];
    double const b0 = w_[i + 1], b1 = h * dw_[i + 1], b2 = h * h * d2w_[i + 1];
    double const v = H0 * a0 + H1 * a1 + H2 * a2 + H3 * b2 + H4 * b1 + H5 * b0;
    double const d = (dH0 * a0 + dH1 * a1 + dH2 * a2 + dH3 * b2 + dH4 * b1 + dH5 * b0) / h;
    return {v, d};
}

double RadialProfile::value(double r) const { return value_and_derivative(r).first; }
double RadialProfile::derivative(double r) const { return value_and_derivative(r).second; }

RadialProfile RadialProfile::dilated(double t) const
{
    std::vector<double> dw(dw_), d2w(d2w_);
    for (auto& d : dw) {
        d /= t;
    }
    for (auto& d : d2w) {
        d /= t * t;
    }
    RadialProfile out(N_, r_min_ * t, h_, w_, std::move(dw), std::move(d2w));
    out.tail_coefficient = tail_coefficient * std::pow(t, N_ - 2.0);
    out.decay_exponent = decay_exponent;
    out.gradient_decay_exponent = gradient_decay_exponent;
    out.A4 = A4;
    out.A5 = A5;
    out.A6 = A6;
    out.plateau_statistic = plateau_statistic;
    out.ode_residual = ode_residual;
    return out;
}

std::vector<RadialProfile::QuadNode> RadialProfile::quadrature_rule() const
{
    double const area = unit_sphere_area(N_);
    static GaussRule const rule = gauss_legendre(6);
    std::vector<QuadNode> out;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double const r = 0.5 * r_min_ * (1.0 + rule.nodes[q]);
        auto [v, d] = value_and_derivative(r);
        out.push_back({r, area * 0.5 * r_min_ * rule.weights[q] * std::pow(r, N_ - 1), v, d});
    }
    std::size_t const last = w_.size() - 1;
    std::size_t const intervals = last - 1;
    std::size_t const even_end = 1 + intervals - intervals % 2;
    for (std::size_t i = 1; i <= last; ++i) {
        double c = 0.0;
        if (i <= even_end) {
            c = ((i == 1 || i == even_end) ? 1.0 : ((i - 1) % 2 == 1 ? 4.0 : 2.0)) * h_ / 3.0;
        }
        if (even_end != last && i + 1 >= last) {
            c += 0.5 * h_;
        }
        double const r = node(i);
        out.push_back({r, area * c * std::pow(r, N_), w_[i], dw_[i]});
    }
    return out;
}

double RadialProfile::radial_integral(std::function<double(double, double, double)> const& g) const
{
    double const area = unit_sphere_area(N_);
    // [0, r_min] by Gauss on the interpolant
    static GaussRule const rule = gauss_legendre(6);
    double inner = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double const r = 0.5 * r_min_ * (1.0 + rule.nodes[q]);
        auto [v, d] = value_and_derivative(r);
        inner += rule.weights[q] * g(r, v, d) * std::pow(r, N_ - 1);
    }
    inner *= 0.5 * r_min_;

    // Simpson in t = log r over nodes 1..M-1; integrand g r^{N-1} * r
    std::size_t const last = w_.size() - 1;
    std::size_t const intervals = last - 1;
    CompensatedSum sum;
    auto term = [&](std::size_t i) {
        double const r = node(i);
        return g(r, w_[i], dw_[i]) * std::pow(r, N_);
    };
    std::size_t const even_end = 1 + intervals - intervals % 2;
    for (std::size_t i = 1; i <= even_end; ++i) {
        double const c = (i == 1 || i == even_end) ? 1.0 : ((i - 1) % 2 == 1 ? 4.0 : 2.0);
        sum += c * term(i);
    }
    double outer = sum.value() * h_ / 3.0;
    if (even_end != last) {
        // odd leftover interval: trapezoid in log r
        outer += 0.5 * h_ * (term(last - 1) + term(last));
    }
    return area * (inner + outer);
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::crossing:
        return "crossing";
    case Classification::slow_decay:
        return "slow_decay";
    case Classification::fast_decay:
        return "fast_decay";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// shooting
// ---------------------------------------------------------------------------

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct RadialOde
{
    Nonlinearity const& nl;
    int N;

    State operator()(double r, State const& y) const { return {y[1], -nl.f(y[0]) - (N - 1.0) * y[1] / r}; }
};

State axpy(State const& y, double h, std::initializer_list<std::pair<double, State const*>> terms)
{
    State out = y;
    for (auto const& [a, k] : terms) {
        out[0] += h * a * (*k)[0];
        out[1] += h * a * (*k)[1];
    }
    return out;
}

} // namespace

ShootResult shoot(Nonlinearity const& nl, int N, double u0, ShootOptions const& opts)
{
    if (u0 < 0.0) {
        throw DomainError("shooting height must be nonnegative");
    }
    if (u0 >= nl.gamma()) {
        std::ostringstream msg;
        msg << "shooting height " << u0 << " must lie below gamma = " << nl.gamma();
        throw DomainError(msg.str());
    }
    int const M = opts.nodes;
    double const h_log = std::log(opts.r_max / opts.r_min) / (M - 1);

    ShootResult result;
    if (u0 == 0.0) {
        std::vector<double> z(M + 1, 0.0);
        result.profile = RadialProfile(N, opts.r_min, h_log, z, z, z);
        result.classification = Classification::slow_decay;
        result.r_end = opts.r_max;
        return result;
    }

    RadialOde const ode{nl, N};
    std::vector<double> w, dw, d2w;
    w.reserve(M + 1);
    dw.reserve(M + 1);
    d2w.reserve(M + 1);
    double const f0 = nl.f(u0), fp0 = nl.fprime(u0);
    w.push_back(u0);
    dw.push_back(0.0);
    d2w.push_back(-f0 / N);

    // series start at r_min
    double const r0 = opts.r_min;
    State y{u0 - f0 * r0 * r0 / (2.0 * N) + f0 * fp0 * std::pow(r0, 4) / (8.0 * N * (N + 2.0)),
            -f0 * r0 / N + f0 * fp0 * std::pow(r0, 3) / (2.0 * N * (N + 2.0))};
    double r = r0;
    w.push_back(y[0]);
    dw.push_back(y[1]);
    d2w.push_back(ode(r, y)[1]);

    double h = 0.1 * r0 * h_log;
    State k1 = ode(r, y);
    bool crossed = false;
    for (int i = 2; i <= M && !crossed; ++i) {
        double const target = opts.r_min * std::exp(h_log * (i - 1));
        while (r < target) {
            bool const last = r + h >= target;
            double const step = last ? target - r : h;
            State const k2 = ode(r + c2 * step, axpy(y, step, {{a21, &k1}}));
            State const k3 = ode(r + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}));
            State const k4 = ode(r + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            State const k5 = ode(r + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            State const k6 =
                ode(r + step, axpy(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            State const yn = axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            double const rn = last ? target : r + step;
            State const k7 = ode(rn, yn);
            double err = 0.0;
            for (int c = 0; c < 2; ++c) {
                double const e =
                    step * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
                double const sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[c]), std::abs(yn[c]));
                err = std::max(err, std::abs(e) / sc);
            }
            if (err <= 1.0) {
                r = rn;
                y = yn;
                k1 = k7;
                if (y[0] < opts.crossing_threshold) {
                    crossed = true;
                    break;
                }
            }
            double const factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (!last || err > 1.0) {
                h = step * factor;
            }
            if (h < 1e-14 * std::max(r, 1e-300)) {
                throw NumericalError("stiffness: step size underflow at r = " + std::to_string(r));
            }
        }
        if (!crossed) {
            w.push_back(y[0]);
            dw.push_back(y[1]);
            d2w.push_back(k1[1]);
        }
    }

    result.r_end = r;
    result.profile = RadialProfile(N, opts.r_min, h_log, w, dw, d2w);
    if (crossed) {
        result.classification = Classification::crossing;
        result.asymptote = -std::abs(y[0]);
        return result;
    }
    double const p = N - 2.0;
    result.asymptote = y[0] + r * y[1] / p;

    // plateau of r^{N-2} w over [r_max/10, r_max/2]
    double sum = 0.0, sum2 = 0.0;
    int count = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        double const ri = result.profile.node(i);
        if (ri >= opts.r_max / 10.0 && ri <= opts.r_max / 2.0) {
            double const v = std::pow(ri, p) * w[i];
            sum += v;
            sum2 += v * v;
            ++count;
        }
    }
    double const mean = sum / count;
    double const stdev = std::sqrt(std::max(0.0, sum2 / count - mean * mean));
    double const stat = mean > 0.0 ? stdev / mean : std::numeric_limits<double>::infinity();
    result.profile.plateau_statistic = stat;
    if (stat < opts.plateau_threshold) {
        result.classification = Classification::fast_decay;
    } else if (result.asymptote < 0.0) {
        result.classification = Classification::crossing;
    } else {
        result.classification = Classification::slow_decay;
    }
    return result;
}

std::pair<double, double> default_bracket(Nonlinearity const& nl)
{
    double const g = nl.gamma();
    if (std::isfinite(g)) {
        return {0.05 * g, 0.99 * g};
    }
    return {0.05, 10.0};
}

double ode_residual(RadialProfile const& w, Nonlinearity const& nl)
{
    int const N = w.dimension();
    auto const& v = w.values();
    auto const& d = w.derivatives();
    double worst = 0.0;
    std::array<double, 5> x{};
    for (std::size_t i = 3; i + 2 < v.size(); ++i) {
        for (int j = 0; j < 5; ++j) {
            x[j] = w.node(i - 2 + j);
        }
        double const r = x[2];
        auto const c = fornberg_weights(r, x, 1);
        double d2 = 0.0;
        for (int j = 0; j < 5; ++j) {
            d2 += c[1][j] * d[i - 2 + j];
        }
        worst = std::max(worst, std::abs(d2 + (N - 1.0) / r * d[i] + nl.f(v[i])));
    }
    return worst;
}

FastDecaySolution find_fast_decay(Nonlinearity const& nl, int N, std::pair<double, double> bracket, double tol,
                                  ShootOptions const& opts)
{
    auto over = [&](double u0) {
        auto const res = shoot(nl, N, u0, opts);
        return res.classification == Classification::crossing || res.asymptote < 0.0;
    };
    double lo = bracket.first, hi = bracket.second;
    bool const over_lo = over(lo), over_hi = over(hi);
    if (over_lo == over_hi) {
        std::ostringstream msg;
        msg << "bracket [" << lo << ", " << hi << "] endpoints classify identically ("
            << (over_lo ? "crossing" : "slow_decay") << ")";
        throw BracketError(msg.str());
    }

    FastDecaySolution sol;
    // coarse scan for extra separatrices
    {
        bool prev = over_lo;
        for (int j = 1; j <= 8; ++j) {
            double const u = lo + (hi - lo) * j / 8.0;
            bool const cur = j == 8 ? over_hi : over(u);
            sol.separatrix_count += cur != prev;
            prev = cur;
        }
    }

    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        double const mid = 0.5 * (lo + hi);
        bool const o = over(mid);
        ((o == over_lo) ? lo : hi) = mid;
        ++sol.bisection_steps;
    }
    // keep the positive orbit of the final bracket
    double const u_pos = over_lo ? hi : lo;
    auto res = shoot(nl, N, u_pos, opts);
    if (res.classification != Classification::fast_decay) {
        throw NumericalError("separatrix refinement ended on a " + to_string(res.classification) + " orbit");
    }
    sol.u0 = u_pos;

    RadialProfile& prof = res.profile;
    double const p = N - 2.0;
    std::vector<double> lr, lw, ldw;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < prof.size(); ++i) {
        double const r = prof.node(i);
        if (r >= opts.r_max / 10.0 && r <= opts.r_max / 2.0) {
            lr.push_back(std::log(r));
            lw.push_back(std::log(prof.values()[i]));
            ldw.push_back(std::log(std::abs(prof.derivatives()[i])));
            double const basis = std::pow(r, -p);
            num += prof.values()[i] * basis;
            den += basis * basis;
        }
    }
    prof.decay_exponent = fit_line(lr, lw).slope;
    prof.gradient_decay_exponent = fit_line(lr, ldw).slope;
    prof.tail_coefficient = num / den;
    prof.A4 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prof.size(); ++i) {
        double const r = prof.node(i);
        double const env = std::pow(1.0 + r, p);
        prof.A4 = std::min(prof.A4, prof.values()[i] * env);
        prof.A5 = std::max(prof.A5, prof.values()[i] * env);
        prof.A6 = std::max(prof.A6, std::abs(prof.derivatives()[i]) * env * (1.0 + r));
    }
    prof.ode_residual = ode_residual(prof, nl);
    sol.profile = std::move(prof);
    return sol;
}

LimitEnergy limit_energy(RadialProfile const& w, Nonlinearity const& nl, double tol)
{
    int const N = w.dimension();
    double const p = N - 2.0;
    double const area = unit_sphere_area(N);
    double const rmax = w.r_max();
    double const c = w.tail_coefficient;

    LimitEnergy e;
    double grad = w.radial_integral([](double, double, double d) { return d * d; });
    // tail of |grad w|^2 for w = c r^{-p}: area p c^2 r_max^{-p}
    grad += area * p * c * c * std::pow(rmax, -p);
    double Fint = w.radial_integral([&](double, double v, double) { return nl.F(v); });
    Fint += integrate_adaptive_semi_infinite(
                [&](double r) { return area * std::pow(r, N - 1) * nl.F(c * std::pow(r, -p)); }, rmax, 1e-300, 1e-10)
                .value;
    e.grad_norm_sq = grad;
    e.F_integral = Fint;
    e.m = 0.5 * grad - Fint;
    e.J0 = 0.5 * (N - 2.0) * grad - N * Fint;
    e.identity_gap = std::abs(e.m - grad / N) / std::abs(e.m);
    e.consistent = e.identity_gap <= tol;
    return e;
}

} // namespace pohozaev
