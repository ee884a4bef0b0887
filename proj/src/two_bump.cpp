#include "pohozaev/two_bump.hpp"

#include "pohozaev/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

namespace {

double norm2(std::span<double const> x)
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

// loops over the tensor points of a grid with the quadrature weight
template <class Fn>
void for_each_point(AxisymGrid const& grid, Fn&& fn)
{
    auto const& z = grid.z();
    auto const& wz = grid.z_weights();
    auto const& rho = grid.rho();
    auto const& wr = grid.rho_weights();
    for (std::size_t j = 0; j < z.size(); ++j) {
        for (std::size_t l = 0; l < rho.size(); ++l) {
            fn(z[j], rho[l], wz[j] * wr[l]);
        }
    }
}

// int_0^b [f(a + t) - f(a)] dt on panels of width <= 0.05
double shifted_increment(Nonlinearity const& nl, double a, double b)
{
    static GaussRule const rule = gauss_legendre(8);
    int const panels = std::max(1, static_cast<int>(std::ceil(b / 0.05)));
    double const h = b / panels, fa = nl.f(a);
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double const c = (p + 0.5) * h;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sum += rule.weights[q] * (nl.f(a + c + 0.5 * h * rule.nodes[q]) - fa);
        }
    }
    return 0.5 * h * sum;
}

// F(a + b) - F(a) - F(b) - f(a) b - f(b) a, arranged so the large bump is the base point
double cross_remainder(Nonlinearity const& nl, double a, double b)
{
    if (a < b) {
        std::swap(a, b);
    }
    if (b <= 0.0) {
        return 0.0;
    }
    return shifted_increment(nl, a, b) - nl.F(b) - nl.f(b) * a;
}

} // namespace

void TwoBumpConfig::validate() const
{
    if (y0.size() != y.size() || y0.size() < 3) {
        throw DomainError("y0 and y must be points of the same dimension N >= 3");
    }
    if (std::abs(norm2(y0) - 1.0) > 1e-12) {
        throw DomainError("y0 must be a unit vector");
    }
    std::vector<double> d(y.size());
    for (std::size_t a = 0; a < y.size(); ++a) {
        d[a] = y[a] - y0[a];
    }
    if (std::abs(norm2(d) - 2.0) > 1e-12) {
        throw DomainError("y must satisfy |y - y0| = 2");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("lambda must lie in [0, 1]");
    }
    if (!(R >= 1.0)) {
        throw DomainError("R must be at least 1");
    }
    if (s && !(*s > 0.0)) {
        throw DomainError("dilation s must be positive");
    }
}

std::vector<double> collinear_partner(std::span<double const> y0)
{
    std::vector<double> y(y0.size());
    std::transform(y0.begin(), y0.end(), y.begin(), [](double v) { return -v; });
    return y;
}

std::vector<double> perpendicular_partner(std::span<double const> y0)
{
    // Gram-Schmidt on the coordinate axis least aligned with y0
    std::size_t k = 0;
    for (std::size_t a = 1; a < y0.size(); ++a) {
        if (std::abs(y0[a]) < std::abs(y0[k])) {
            k = a;
        }
    }
    std::vector<double> e(y0.size(), 0.0);
    e[k] = 1.0;
    double const dot = y0[k];
    for (std::size_t a = 0; a < y0.size(); ++a) {
        e[a] -= dot * y0[a];
    }
    double const n = norm2(e);
    std::vector<double> y(y0.begin(), y0.end());
    for (std::size_t a = 0; a < y0.size(); ++a) {
        y[a] += 2.0 * e[a] / n;
    }
    return y;
}

double C_lambda(double lambda, double j) { return std::pow(lambda, j) + std::pow(1.0 - lambda, j); }

TwoBumpField::TwoBumpField(std::shared_ptr<RadialProfile const> w, TwoBumpConfig cfg)
    : w_(std::move(w))
    , cfg_(std::move(cfg))
{
    cfg_.validate();
    if (static_cast<int>(cfg_.y0.size()) != w_->dimension()) {
        throw DomainError("configuration dimension does not match the profile");
    }
    collinear_ = collinear_with(cfg_.y0, cfg_.y, t_);
}

std::pair<double, double> TwoBumpField::bump0(double dist) const
{
    double const l = cfg_.lambda;
    if (l <= 0.0) {
        return {0.0, 0.0};
    }
    auto const [v, d] = w_->value_and_derivative(dist / l);
    return {v, d / l};
}

std::pair<double, double> TwoBumpField::bumpy(double dist) const
{
    double const l = 1.0 - cfg_.lambda;
    if (l <= 0.0) {
        return {0.0, 0.0};
    }
    auto const [v, d] = w_->value_and_derivative(dist / l);
    return {v, d / l};
}

double TwoBumpField::value(std::span<double const> x) const
{
    double d0 = 0.0, dy = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        d0 += (x[a] - cfg_.R * cfg_.y0[a]) * (x[a] - cfg_.R * cfg_.y0[a]);
        dy += (x[a] - cfg_.R * cfg_.y[a]) * (x[a] - cfg_.R * cfg_.y[a]);
    }
    return bump0(std::sqrt(d0)).first + bumpy(std::sqrt(dy)).first;
}

double TwoBumpField::value_axi(double z, double rho) const
{
    return bump0(std::hypot(z - z0(), rho)).first + bumpy(std::hypot(z - zy(), rho)).first;
}

AxisymGrid TwoBumpField::grid(double spacing_scale, double extent_factor) const
{
    if (!collinear_) {
        throw DomainError("axisymmetric grid needs collinear centers; use Monte Carlo");
    }
    AxisymGridSpec spec;
    spec.N = dimension();
    double const l = cfg_.lambda;
    if (l > 0.0) {
        spec.anchors.push_back({z0(), std::min(0.1, spacing_scale * l)});
    }
    if (l < 1.0) {
        spec.anchors.push_back({zy(), std::min(0.1, spacing_scale * (1.0 - l))});
    }
    spec.anchors.push_back({0.0, 0.1});
    double const outer = std::max(std::abs(z0()), std::abs(zy()));
    spec.extent = std::max(4.0 * cfg_.R, extent_factor * (outer + 1.0));
    return AxisymGrid(spec);
}

bool TwoBumpField::uses_envelope(AxisymGrid const& grid) const
{
    (void)grid;
    double const lm = cfg_.lambda_minus();
    if (lm <= 0.0) {
        return false;
    }
    double const sep = std::abs(z0() - zy());
    return sep / lm > w_->r_max();
}

namespace {

void check_covers(TwoBumpField const& U, AxisymGrid const& grid)
{
    auto const& zb = grid.z_breaks();
    for (double c : {U.z0(), U.zy()}) {
        if (c <= zb.front() || c >= zb.back()) {
            throw DomainError("grid error: the grid does not cover both bump centers");
        }
    }
}

TwoBumpIntegrals integrals_once(TwoBumpField const& U, Nonlinearity const& nl, AxisymGrid const& grid,
                                MixedPowers powers)
{
    int const N = U.dimension();
    double const crit = 2.0 * N / (N - 2.0);
    double const z0 = U.z0(), zy = U.zy();
    CompensatedSum gc, eps, mir, fc, ct, mp, cn, cm;
    for_each_point(grid, [&](double z, double rho, double W) {
        double const d0 = std::hypot(z - z0, rho), dy = std::hypot(z - zy, rho);
        auto const [a, da] = U.bump0(d0);
        auto const [b, db] = U.bumpy(dy);
        double const u = a + b;
        double const ucrit = std::pow(std::abs(u), crit);
        cn += W * ucrit;
        cm += W * z * ucrit;
        if (a == 0.0 || b == 0.0) {
            return;
        }
        double const cosang = ((z - z0) * (z - zy) + rho * rho) / (d0 * dy);
        gc += W * da * db * cosang;
        double const fa = nl.f(a), fb = nl.f(b);
        eps += W * fa * b;
        mir += W * fb * a;
        double const rem = cross_remainder(nl, a, b);
        ct += W * rem;
        fc += W * (rem + fa * b + fb * a);
        mp += W * std::pow(a, powers.a) * std::pow(b, powers.b);
    });
    TwoBumpIntegrals out;
    out.grad_cross = gc.value();
    out.epsilon = eps.value();
    out.epsilon_mirror = mir.value();
    out.F_cross = fc.value();
    out.cross_term = ct.value();
    out.mixed_power = mp.value();
    out.crit_norm = cn.value();
    out.crit_moment = cm.value();
    return out;
}

} // namespace

TwoBumpEstimate two_bump_integrals(TwoBumpField const& U, Nonlinearity const& nl, AxisymGrid const& grid,
                                   bool with_error, MixedPowers powers)
{
    check_covers(U, grid);
    TwoBumpEstimate est;
    est.envelope_used = U.uses_envelope(grid);
    if (!with_error) {
        est.value = integrals_once(U, nl, grid, powers);
        return est;
    }
    auto const coarse = integrals_once(U, nl, grid, powers);
    est.value = integrals_once(U, nl, grid.refined(), powers);
    auto diff = [](double a, double b) { return std::abs(a - b); };
    est.error.grad_cross = diff(coarse.grad_cross, est.value.grad_cross);
    est.error.epsilon = diff(coarse.epsilon, est.value.epsilon);
    est.error.epsilon_mirror = diff(coarse.epsilon_mirror, est.value.epsilon_mirror);
    est.error.F_cross = diff(coarse.F_cross, est.value.F_cross);
    est.error.cross_term = diff(coarse.cross_term, est.value.cross_term);
    est.error.mixed_power = diff(coarse.mixed_power, est.value.mixed_power);
    est.error.crit_norm = diff(coarse.crit_norm, est.value.crit_norm);
    est.error.crit_moment = diff(coarse.crit_moment, est.value.crit_moment);
    return est;
}

FieldMoments two_bump_moments(TwoBumpField const& U, Nonlinearity const& nl, AxisymGrid const& grid,
                              TwoBumpIntegrals const* cross)
{
    check_covers(U, grid);
    int const N = U.dimension();
    double const l = U.config().lambda;
    auto const self = limit_energy(U.profile(), nl);
    double const p = N - 2.0;
    double const c = U.profile().tail_coefficient;
    double const self_tail = unit_sphere_area(N) * p * c * c * std::pow(U.profile().r_max(), -p);

    TwoBumpIntegrals local;
    if (cross == nullptr) {
        local = integrals_once(U, nl, grid, {});
        cross = &local;
    }
    FieldMoments m;
    m.N = N;
    m.grad_norm_sq = C_lambda(l, N - 2.0) * self.grad_norm_sq + 2.0 * cross->grad_cross;
    m.F_integral = C_lambda(l, N) * self.F_integral + cross->F_cross;
    m.grad_tail = C_lambda(l, N - 2.0) * self_tail;
    m.radii.reserve(grid.point_count());
    m.mass.reserve(grid.point_count());
    for_each_point(grid, [&](double z, double rho, double W) {
        double const u = U.value_axi(z, rho);
        m.radii.push_back(std::hypot(z, rho));
        m.mass.push_back(W * u * u);
    });
    m.compress();
    return m;
}

double two_bump_residual_norm(TwoBumpField const& U, Potential const* pot, Nonlinearity const& nl,
                              AxisymGrid const& grid, double s)
{
    check_covers(U, grid);
    int const N = U.dimension();
    double const l = U.config().lambda;
    double const z0 = U.z0(), zy = U.zy();
    CompensatedSum sum;
    for_each_point(grid, [&](double z, double rho, double W) {
        double const a = U.bump0(std::hypot(z - z0, rho)).first;
        double const b = U.bumpy(std::hypot(z - zy, rho)).first;
        double lap = 0.0; // -Delta U
        if (l > 0.0) {
            lap += nl.f(a) / (l * l);
        }
        if (l < 1.0) {
            lap += nl.f(b) / ((1.0 - l) * (1.0 - l));
        }
        double res = lap / (s * s) - nl.f(a + b);
        if (pot != nullptr) {
            res += pot->V_r(s * std::hypot(z, rho)) * (a + b);
        }
        sum += W * res * res;
    });
    return std::sqrt(std::pow(s, N) * sum.value());
}

EpsilonResult epsilon(TwoBumpField const& U, Nonlinearity const& nl, McSampler const& mc)
{
    auto const& cfg = U.config();
    EpsilonResult out;
    if (cfg.lambda <= 0.0 || cfg.lambda >= 1.0) {
        return out;
    }
    if (U.axisymmetric()) {
        auto const grid = U.grid();
        double const z0 = U.z0(), zy = U.zy();
        auto const r = integrate_axisym(
            [&](double z, double rho) {
                return nl.f(U.bump0(std::hypot(z - z0, rho)).first) * U.bumpy(std::hypot(z - zy, rho)).first;
            },
            grid);
        out.value = r.value;
        out.error = r.error;
    } else {
        McSampler s = mc;
        s.centers.clear();
        std::vector<double> c0(cfg.y0.size()), cy(cfg.y.size());
        for (std::size_t a = 0; a < c0.size(); ++a) {
            c0[a] = cfg.R * cfg.y0[a];
            cy[a] = cfg.R * cfg.y[a];
        }
        s.centers = {c0, cy};
        auto const r = integrate_mc(
            [&](std::span<double const> x) {
                double d0 = 0.0, dy = 0.0;
                for (std::size_t a = 0; a < x.size(); ++a) {
                    d0 += (x[a] - c0[a]) * (x[a] - c0[a]);
                    dy += (x[a] - cy[a]) * (x[a] - cy[a]);
                }
                return nl.f(U.bump0(std::sqrt(d0)).first) * U.bumpy(std::sqrt(dy)).first;
            },
            U.dimension(), s);
        out.value = r.value;
        out.error = r.stderr_mc;
    }
    if (out.error > 0.02 * std::abs(out.value)) {
        std::ostringstream msg;
        msg << "resolution: epsilon error estimate " << out.error / std::abs(out.value) << " exceeds 2%";
        throw NumericalError(msg.str());
    }
    return out;
}

InteractionReport interaction_suite(std::shared_ptr<RadialProfile const> w, Nonlinearity const& nl,
                                    std::vector<TwoBumpConfig> const& cfg_list, MixedPowers powers, int jobs)
{
    if (cfg_list.size() < 2) {
        throw DomainError("interaction suite needs at least two configurations");
    }
    InteractionReport rep;
    rep.lambda = cfg_list.front().lambda;
    rep.powers = powers;
    if (!(rep.lambda > 0.0 && rep.lambda < 1.0)) {
        throw DomainError("interaction suite needs lambda strictly inside (0, 1)");
    }
    for (auto const& cfg : cfg_list) {
        if (cfg.lambda != rep.lambda || cfg.y0 != cfg_list.front().y0 || cfg.y != cfg_list.front().y) {
            throw DomainError("interaction suite configurations must share y0, y and lambda");
        }
    }
    rep.rows.resize(cfg_list.size());
    parallel_for(cfg_list.size(), jobs, [&](std::size_t k) {
        auto const& cfg = cfg_list[k];
        TwoBumpField const U(w, cfg);
        auto const grid = U.grid();
        auto const est = two_bump_integrals(U, nl, grid, true, powers);
        if (est.error.epsilon > 0.02 * std::abs(est.value.epsilon)) {
            std::ostringstream msg;
            msg << "resolution: epsilon error estimate exceeds 2% at R = " << cfg.R;
            throw NumericalError(msg.str());
        }
        InteractionRow row;
        row.R = cfg.R;
        row.epsilon = est.value.epsilon;
        row.epsilon_error = est.error.epsilon;
        row.grad_cross = est.value.grad_cross;
        row.grad_cross_error = est.error.grad_cross;
        row.mixed_power = est.value.mixed_power;
        row.mixed_power_error = est.error.mixed_power;
        row.cross_term = est.value.cross_term;
        row.cross_term_error = est.error.cross_term;
        row.ratio = row.cross_term / row.epsilon;
        row.identity_gap =
            std::abs(row.grad_cross - row.epsilon / (rep.lambda * rep.lambda)) / std::abs(row.grad_cross);
        row.envelope_used = est.envelope_used;
        rep.rows[k] = row;
    });
    std::sort(rep.rows.begin(), rep.rows.end(), [](auto const& a, auto const& b) { return a.R < b.R; });
    std::vector<double> R, e, ee, g, ge, mpv, mpe, c, ce;
    for (auto const& r : rep.rows) {
        R.push_back(r.R);
        e.push_back(r.epsilon);
        ee.push_back(r.epsilon_error);
        g.push_back(r.grad_cross);
        ge.push_back(r.grad_cross_error);
        mpv.push_back(r.mixed_power);
        mpe.push_back(r.mixed_power_error);
        c.push_back(r.cross_term);
        ce.push_back(r.cross_term_error);
    }
    rep.epsilon_fit = fit_loglog_weighted(R, e, ee);
    rep.grad_fit = fit_loglog_weighted(R, g, ge);
    rep.mixed_fit = fit_loglog_weighted(R, mpv, mpe);
    rep.cross_fit = fit_loglog_weighted(R, c, ce);
    rep.ratio_decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (!(std::abs(rep.rows[i].ratio) < std::abs(rep.rows[i - 1].ratio))) {
            rep.ratio_decreasing = false;
        }
    }
    return rep;
}

AcpReport acp_pointwise_check(Nonlinearity const& nl, double C5, int holdout, std::uint64_t seed, double slack)
{
    int const N = nl.dimension();
    double const crit = 2.0 * N / (N - 2.0);
    AcpReport rep;
    rep.sigma = std::min(crit / 4.0, 1.0);
    rep.C5 = C5;
    auto ratios = [&](double u, double v) -> std::pair<double, double> {
        double const uv = std::abs(u * v);
        if (uv == 0.0) {
            return {0.0, 0.0};
        }
        double const df = std::abs(nl.f(u + v) - nl.f(u) - nl.f(v));
        double const dF = std::abs(nl.F(u + v) - nl.F(u) - nl.F(v) - nl.f(u) * v - nl.f(v) * u);
        return {df / std::pow(uv, rep.sigma), dF / std::pow(uv, 2.0 * rep.sigma)};
    };
    // the ratios are continuous on the box, so a dense grid approximates the supremum
    int const n = 241;
    double C6f = 0.0, C6F = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double const u = -C5 + 2.0 * C5 * i / (n - 1);
            double const v = -C5 + 2.0 * C5 * j / (n - 1);
            auto const [a, b] = ratios(u, v);
            C6f = std::max(C6f, a);
            C6F = std::max(C6F, b);
        }
    }
    rep.C6 = std::max(C6f, C6F);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-C5, C5);
    for (int k = 0; k < holdout; ++k) {
        auto const [a, b] = ratios(uni(rng), uni(rng));
        rep.holdout_f_ratio = std::max(rep.holdout_f_ratio, a);
        rep.holdout_F_ratio = std::max(rep.holdout_F_ratio, b);
    }
    rep.pass = std::isfinite(rep.C6) && rep.holdout_f_ratio <= rep.C6 * (1.0 + slack) &&
               rep.holdout_F_ratio <= rep.C6 * (1.0 + slack);
    return rep;
}

} // namespace pohozaev
