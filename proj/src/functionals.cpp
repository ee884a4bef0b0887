#include "pohozaev/functionals.hpp"

#include <array>
#include <cmath>
#include <map>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

std::pair<double, double> FieldMoments::potential_terms(Potential const& pot, double s) const
{
    if (!pot.is_radial()) {
        throw DomainError("field moments carry radial mass only; the potential must be radial");
    }
    CompensatedSum v, g;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double const r = s * radii[i];
        v += mass[i] * pot.V_r(r);
        g += mass[i] * pot.grad_dot_r(r);
    }
    double const sN = std::pow(s, N);
    return {sN * v.value(), sN * g.value()};
}

double FieldMoments::total_mass() const
{
    CompensatedSum m;
    for (double x : mass) {
        m += x;
    }
    return m.value();
}

void FieldMoments::compress(int bins_per_decade)
{
    struct Bin
    {
        double m = 0.0, mr = 0.0, mrr = 0.0;
    };
    std::map<long, Bin> bins;
    double origin = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double const r = radii[i];
        if (r < 1e-12) {
            origin += mass[i];
            continue;
        }
        auto& b = bins[static_cast<long>(std::floor(std::log10(r) * bins_per_decade))];
        b.m += mass[i];
        b.mr += mass[i] * r;
        b.mrr += mass[i] * r * r;
    }
    std::vector<double> nr, nm;
    if (origin != 0.0) {
        nr.push_back(0.0);
        nm.push_back(origin);
    }
    for (auto const& [key, b] : bins) {
        if (b.m == 0.0) {
            continue;
        }
        double const mean = b.mr / b.m;
        double const sd = std::sqrt(std::max(0.0, b.mrr / b.m - mean * mean));
        nr.push_back(mean - sd);
        nm.push_back(0.5 * b.m);
        nr.push_back(mean + sd);
        nm.push_back(0.5 * b.m);
    }
    radii = std::move(nr);
    mass = std::move(nm);
}

double sobolev_constant(int N)
{
    if (N < 3) {
        throw DomainError("Sobolev constant requires N >= 3");
    }
    double const n = N;
    return M_PI * n * (n - 2.0) * std::pow(std::tgamma(0.5 * n) / std::tgamma(n), 2.0 / n);
}

double rho_bound(int N, double A2)
{
    double const crit = 2.0 * N / (N - 2.0);
    double const S = sobolev_constant(N);
    return std::pow(std::pow(S, 0.5 * crit) / (2.0 * crit * A2), 1.0 / (crit - 2.0));
}

EnergyReport evaluate(FieldMoments const& u, Potential const* pot, Nonlinearity const& nl, double s)
{
    if (!(s > 0.0)) {
        throw DomainError("dilation must be positive");
    }
    if (u.grad_tail > 0.01 * std::abs(u.grad_norm_sq)) {
        throw NumericalError("truncation: gradient tail exceeds 1% of ||grad u||^2");
    }
    int const N = u.N;
    EnergyReport e;
    e.grad_norm_sq = std::pow(s, N - 2) * u.grad_norm_sq;
    e.F_integral = std::pow(s, N) * u.F_integral;
    if (pot != nullptr) {
        std::tie(e.V_quadratic, e.gradV_quadratic) = u.potential_terms(*pot, s);
    }
    e.I_0 = 0.5 * e.grad_norm_sq - e.F_integral;
    e.J_0 = 0.5 * (N - 2.0) * e.grad_norm_sq - N * e.F_integral;
    e.I_V = 0.5 * e.grad_norm_sq + 0.5 * e.V_quadratic - e.F_integral;
    e.J_V = 0.5 * (N - 2.0) * e.grad_norm_sq + 0.5 * N * (e.gradV_quadratic / N + e.V_quadratic) -
            N * e.F_integral;
    e.rho_bound = rho_bound(N, nl.A2());
    return e;
}

std::vector<std::pair<double, double>> scaling_path(FieldMoments const& u, Potential const* pot,
                                                    std::vector<double> const& t_list)
{
    std::vector<std::pair<double, double>> out;
    for (double t : t_list) {
        if (!(t > 0.0)) {
            throw DomainError("scaling path needs positive t");
        }
        double const N = u.N;
        double v = 0.0;
        if (pot != nullptr) {
            v = u.potential_terms(*pot, t).first;
        }
        out.emplace_back(t, 0.5 * std::pow(t, N - 2) * u.grad_norm_sq + 0.5 * v - std::pow(t, N) * u.F_integral);
    }
    return out;
}

namespace {

// log-Simpson nodes on [a, b] for the envelope tail
void tail_nodes(double a, double b, int per_decade, int N, std::vector<double>& r, std::vector<double>& wts)
{
    double const area = unit_sphere_area(N);
    int n = std::max(2, static_cast<int>(std::ceil(per_decade * std::log10(b / a))));
    n += n % 2;
    double const h = std::log(b / a) / n;
    for (int i = 0; i <= n; ++i) {
        double const c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double const x = a * std::exp(h * i);
        r.push_back(x);
        wts.push_back(area * c * h / 3.0 * std::pow(x, N));
    }
}

} // namespace

FieldMoments radial_moments(RadialProfile const& w, Nonlinearity const& nl, double tail_factor)
{
    int const N = w.dimension();
    double const p = N - 2.0;
    double const area = unit_sphere_area(N);
    double const rmax = w.r_max();
    double const c = w.tail_coefficient;

    FieldMoments m;
    m.N = N;
    for (auto const& q : w.quadrature_rule()) {
        m.radii.push_back(q.r);
        m.mass.push_back(q.weight * q.w * q.w);
    }
    std::vector<double> tr, tw;
    tail_nodes(rmax, tail_factor * rmax, 40, N, tr, tw);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        double const v = c * std::pow(tr[i], -p);
        m.radii.push_back(tr[i]);
        m.mass.push_back(tw[i] * v * v);
    }
    auto const e = limit_energy(w, nl);
    m.grad_norm_sq = e.grad_norm_sq;
    m.F_integral = e.F_integral;
    m.grad_tail = area * p * c * c * std::pow(rmax, -p);
    return m;
}

double radial_residual_norm(RadialProfile const& w, Potential const* pot, Nonlinearity const& nl, double s)
{
    int const N = w.dimension();
    auto const& v = w.values();
    auto const& d = w.derivatives();
    auto const& d2 = w.second_derivatives();
    auto const rule = w.quadrature_rule();
    std::size_t const gauss = rule.size() - (v.size() - 1);

    auto laplacian_at_node = [&](std::size_t i) {
        double const r = w.node(i);
        double dd = d2[i];
        if (i >= 3 && i + 2 < v.size()) {
            std::array<double, 5> x{};
            for (int j = 0; j < 5; ++j) {
                x[j] = w.node(i - 2 + j);
            }
            auto const c = fornberg_weights(r, x, 1);
            dd = 0.0;
            for (int j = 0; j < 5; ++j) {
                dd += c[1][j] * d[i - 2 + j];
            }
        }
        return dd + (N - 1.0) / r * d[i];
    };

    CompensatedSum sum;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        auto const& q = rule[k];
        // inside r_min the series start gives Delta w = -f(w(0)) to leading order
        double const lap = k < gauss ? -nl.f(v.front()) : laplacian_at_node(k - gauss + 1);
        double res = -lap / (s * s) - nl.f(q.w);
        if (pot != nullptr) {
            res += pot->V_r(s * q.r) * q.w;
        }
        sum += q.weight * res * res;
    }
    // envelope tail is harmonic: only V w - f(w) remains
    if (pot != nullptr) {
        std::vector<double> tr, tw;
        tail_nodes(w.r_max(), 1e3 * w.r_max(), 40, N, tr, tw);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            double const u = w.value(tr[i]);
            double const res = pot->V_r(s * tr[i]) * u - nl.f(u);
            sum += tw[i] * res * res;
        }
    }
    return std::sqrt(std::pow(s, N) * sum.value());
}

} // namespace pohozaev
