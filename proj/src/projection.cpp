#include "pohozaev/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pohozaev/parallel.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

XiSample xi(FieldMoments const& u, Potential const* pot, double s)
{
    if (!(s > 0.0)) {
        throw DomainError("dilation s must be positive");
    }
    int const N = u.N;
    double vq = 0.0, gq = 0.0;
    if (pot != nullptr) {
        std::tie(vq, gq) = u.potential_terms(*pot, s);
    }
    double const G = std::pow(s, N - 2) * u.grad_norm_sq;
    double const F = std::pow(s, N) * u.F_integral;
    XiSample out;
    out.s = s;
    out.value = 0.5 * G + 0.5 * vq - F;
    out.derivative = (0.5 * (N - 2.0) * G + 0.5 * N * vq + 0.5 * gq - N * F) / s;
    return out;
}

double psi(FieldMoments const& u, Potential const* pot, double s)
{
    int const N = u.N;
    double vq = 0.0, gq = 0.0;
    if (pot != nullptr) {
        std::tie(vq, gq) = u.potential_terms(*pot, s);
    }
    // potential_terms carries s^N; psi uses the unscaled integrals against V(sx)
    double const sN = std::pow(s, N);
    return s * s * (u.F_integral - 0.5 * (gq / N + vq) / sN);
}

namespace {

// Brent's method on a sign-changing bracket
double brent_root(std::function<double(double)> const& g, double a, double b, double fa, double fb, double tol,
                  int max_iter, int& iterations)
{
    double c = a, fc = fa, d = b - a, e = d;
    for (iterations = 0; iterations < max_iter; ++iterations) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double const tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        double const xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            return b;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            double const s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            }
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = g(b);
    }
    return b;
}

} // namespace

ProjectionResult project(FieldMoments const& u, Potential const* pot, Nonlinearity const& nl,
                         ProjectionOptions const& opts)
{
    if (!(u.grad_norm_sq > 0.0)) {
        throw DomainError("projection needs a nonzero field");
    }
    ProjectionResult res;
    auto deriv = [&](double s) {
        auto const x = xi(u, pot, s);
        res.xi_values.push_back(x);
        return x.derivative;
    };
    double a = opts.lo, b = opts.hi;
    double fa = deriv(a), fb = deriv(b);
    for (int k = 0; k < opts.expansions && !(fa > 0.0 && fb < 0.0); ++k) {
        if (!(fa > 0.0)) {
            a /= 2.0;
            fa = deriv(a);
        }
        if (!(fb < 0.0)) {
            b *= 2.0;
            fb = deriv(b);
        }
    }
    if (!(fa > 0.0 && fb < 0.0)) {
        std::ostringstream msg;
        msg << "projection failure: xi' has no sign change on [" << a << ", " << b << "]; samples:";
        for (auto const& x : res.xi_values) {
            msg << " (" << x.s << ", " << x.derivative << ")";
        }
        throw ProjectionError(msg.str());
    }
    res.bracket = {a, b};
    res.s_star = brent_root(deriv, a, b, fa, fb, opts.tol, opts.max_iterations, res.iterations);

    // uniqueness certificate on log-spaced points of (a, 4 b)
    res.unique = true;
    double prev = -std::numeric_limits<double>::infinity();
    int const n = opts.certificate_points;
    for (int i = 0; i < n; ++i) {
        double const t = (i + 0.5) / n;
        double const s = a * std::pow(4.0 * b / a, t);
        double const p = psi(u, pot, s);
        if (!(p > prev)) {
            res.unique = false;
        }
        prev = p;
    }
    std::sort(res.xi_values.begin(), res.xi_values.end(), [](auto const& x, auto const& y) { return x.s < y.s; });
    res.report = evaluate(u, pot, nl, res.s_star);
    res.projected_energy = res.report.I_V;
    return res;
}

FieldMoments two_bump_moments_mc(TwoBumpField const& U, Nonlinearity const& nl, McSampler const& mc)
{
    auto const& cfg = U.config();
    int const N = U.dimension();
    McSampler s = mc;
    s.centers.clear();
    std::vector<double> c0(N), cy(N);
    for (int a = 0; a < N; ++a) {
        c0[a] = cfg.R * cfg.y0[a];
        cy[a] = cfg.R * cfg.y[a];
    }
    if (cfg.lambda > 0.0) {
        s.centers.push_back(c0);
    }
    if (cfg.lambda < 1.0) {
        s.centers.push_back(cy);
    }
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double const norm_const = unit_sphere_area(N) / N;
    std::size_t const K = s.centers.size();

    FieldMoments m;
    m.N = N;
    CompensatedSum gc, fc;
    std::vector<double> x(N), d(N);
    double const inv_n = 1.0 / static_cast<double>(s.samples);
    for (std::int64_t i = 0; i < s.samples; ++i) {
        auto const& c = s.centers[std::min<std::size_t>(static_cast<std::size_t>(uni(rng) * K), K - 1)];
        double const t = std::pow(uni(rng), 1.0 / N);
        double const r = t / (1.0 - t);
        double len = 0.0;
        for (auto& v : d) {
            v = gauss(rng);
            len += v * v;
        }
        len = std::sqrt(len);
        double pdf = 0.0;
        for (int a = 0; a < N; ++a) {
            x[a] = c[a] + r * d[a] / len;
        }
        for (auto const& ck : s.centers) {
            double dist = 0.0;
            for (int a = 0; a < N; ++a) {
                dist += (x[a] - ck[a]) * (x[a] - ck[a]);
            }
            pdf += std::pow(1.0 + std::sqrt(dist), -(N + 1.0));
        }
        pdf /= static_cast<double>(K) * norm_const;
        double const W = inv_n / pdf;

        double d0 = 0.0, dy = 0.0, dot = 0.0, rx = 0.0;
        for (int a = 0; a < N; ++a) {
            d0 += (x[a] - c0[a]) * (x[a] - c0[a]);
            dy += (x[a] - cy[a]) * (x[a] - cy[a]);
            dot += (x[a] - c0[a]) * (x[a] - cy[a]);
            rx += x[a] * x[a];
        }
        d0 = std::sqrt(d0);
        dy = std::sqrt(dy);
        auto const [a0, da] = U.bump0(d0);
        auto const [b0, db] = U.bumpy(dy);
        if (a0 != 0.0 && b0 != 0.0) {
            gc += W * da * db * dot / (d0 * dy);
            fc += W * (nl.F(a0 + b0) - nl.F(a0) - nl.F(b0));
        }
        m.radii.push_back(std::sqrt(rx));
        m.mass.push_back(W * (a0 + b0) * (a0 + b0));
    }
    double const l = cfg.lambda;
    auto const self = limit_energy(U.profile(), nl);
    m.grad_norm_sq = C_lambda(l, N - 2.0) * self.grad_norm_sq + 2.0 * gc.value();
    m.F_integral = C_lambda(l, N) * self.F_integral + fc.value();
    double const p = N - 2.0, c = U.profile().tail_coefficient;
    m.grad_tail = C_lambda(l, N - 2.0) * unit_sphere_area(N) * p * c * c * std::pow(U.profile().r_max(), -p);
    m.compress();
    return m;
}

LandscapeReport projection_landscape(std::shared_ptr<RadialProfile const> w, Potential const* pot,
                                     Nonlinearity const& nl, double R, std::vector<double> const& lambda_grid,
                                     std::vector<YChoice> const& y_choices, std::vector<double> const& y0,
                                     double p0, McSampler const& mc, int jobs)
{
    LandscapeReport rep;
    rep.R = R;
    rep.p0 = p0;
    rep.rho = rho_bound(w->dimension(), nl.A2());
    rep.max_energy = -std::numeric_limits<double>::infinity();
    rep.endpoint_max = -std::numeric_limits<double>::infinity();
    rep.all_above_rho = true;
    for (auto const& yc : y_choices) {
        for (double lambda : lambda_grid) {
            LandscapeCell cell;
            cell.lambda = lambda;
            cell.y_tag = yc.tag;
            rep.cells.push_back(cell);
        }
    }
    parallel_for(rep.cells.size(), jobs, [&](std::size_t k) {
        auto& cell = rep.cells[k];
        auto const& yc = y_choices[k / lambda_grid.size()];
        double const lambda = cell.lambda;
        try {
            TwoBumpConfig cfg;
            cfg.y0 = y0;
            cfg.y = yc.y;
            cfg.lambda = lambda;
            cfg.R = R;
            TwoBumpField const U(w, cfg);
            FieldMoments m;
            double bary = 0.0;
            if (U.axisymmetric()) {
                auto const grid = U.grid();
                auto const est = two_bump_integrals(U, nl, grid, false);
                m = two_bump_moments(U, nl, grid, &est.value);
                bary = est.value.crit_moment / est.value.crit_norm;
            } else {
                m = two_bump_moments_mc(U, nl, mc);
                bary = std::numeric_limits<double>::quiet_NaN(); // off-axis; not tracked
            }
            auto const pr = project(m, pot, nl);
            cell.ok = true;
            cell.s_star = pr.s_star;
            cell.energy = pr.projected_energy;
            cell.grad_norm = std::sqrt(pr.report.grad_norm_sq);
            cell.unique = pr.unique;
            cell.barycenter = pr.s_star * bary;
        } catch (Error const& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });
    for (auto const& cell : rep.cells) {
        if (cell.ok) {
            rep.max_energy = std::max(rep.max_energy, cell.energy);
            if (cell.lambda == 0.0 || cell.lambda == 1.0) {
                rep.endpoint_max = std::max(rep.endpoint_max, cell.energy);
            }
            if (!(cell.grad_norm >= rep.rho)) {
                rep.all_above_rho = false;
            }
        }
    }
    rep.eta = 2.0 * p0 - rep.max_energy;
    return rep;
}

} // namespace pohozaev
