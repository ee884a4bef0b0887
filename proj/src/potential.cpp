#include "pohozaev/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

namespace {

double norm(std::span<double const> x)
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace

Potential Potential::radial(std::string name, RadialFn V, RadialFn grad_dot, RadialFn hess_quad, double k, double A0,
                            double A1)
{
    Potential p;
    p.name_ = std::move(name);
    p.radial_ = true;
    p.V_r_ = std::move(V);
    p.gd_r_ = std::move(grad_dot);
    p.hq_r_ = std::move(hess_quad);
    p.V_ = [f = p.V_r_](std::span<double const> x) { return f(norm(x)); };
    p.gd_ = [f = p.gd_r_](std::span<double const> x) { return f(norm(x)); };
    p.hq_ = [f = p.hq_r_](std::span<double const> x) { return f(norm(x)); };
    p.k_ = k;
    p.A0_ = A0;
    p.A1_ = A1;
    return p;
}

Potential Potential::general(std::string name, PointFn V, PointFn grad_dot, PointFn hess_quad, double k, double A0,
                             double A1)
{
    Potential p;
    p.name_ = std::move(name);
    p.radial_ = false;
    p.V_ = std::move(V);
    p.gd_ = std::move(grad_dot);
    p.hq_ = std::move(hess_quad);
    p.k_ = k;
    p.A0_ = A0;
    p.A1_ = A1;
    return p;
}

double Potential::V(std::span<double const> x) const { return V_(x); }
double Potential::grad_dot(std::span<double const> x) const { return gd_(x); }
double Potential::hess_quad(std::span<double const> x) const { return hq_(x); }

double Potential::V_minus(std::span<double const> x) const { return std::min(0.0, V(x)); }
double Potential::W_plus(std::span<double const> x) const { return std::max(0.0, grad_dot(x)); }

double Potential::Z_minus(std::span<double const> x, int N) const
{
    return std::min(0.0, grad_dot(x) / N + V(x));
}

double Potential::K_plus(std::span<double const> x, int N) const
{
    return std::max(0.0, grad_dot(x) + hess_quad(x) / N);
}

Potential model_potential(double k, double scale, int N)
{
    if (N < 3) {
        throw ConfigError("dimension must be at least 3");
    }
    if (!(k > std::max(2.0, N - 2.0))) {
        std::ostringstream msg;
        msg << "decay exponent k = " << k << " must exceed max{2, N-2} = " << std::max(2.0, N - 2.0);
        throw ConfigError(msg.str());
    }
    if (!(scale > 0.0)) {
        throw ConfigError("potential scale must be positive");
    }
    std::ostringstream name;
    name << "model(k=" << k << ",scale=" << scale << ")";
    return Potential::radial(
        name.str(), [k, scale](double r) { return scale * std::pow(1.0 + r, -k); },
        [k, scale](double r) { return -k * scale * r * std::pow(1.0 + r, -k - 1.0); },
        [k, scale](double r) { return k * (k + 1.0) * scale * r * r * std::pow(1.0 + r, -k - 2.0); }, k, scale,
        scale * k);
}

SpaceIntegral radial_space_integral(std::function<double(double)> const& g, int N, double truncation_radius)
{
    double const area = unit_sphere_area(N);
    auto density = [&](double r) { return area * std::pow(r, N - 1) * g(r); };

    CompensatedSum total;
    double a = 0.0;
    for (double b = 1e-3; a < truncation_radius; b *= 10.0) {
        b = std::min(b, truncation_radius);
        // split each decade in two so kinks (sign cut-offs) stay resolvable
        double const m = std::sqrt(std::max(a, 1e-4) * b);
        if (m > a && m < b) {
            total += integrate_adaptive(density, a, m, 1e-300, 1e-11).value;
            total += integrate_adaptive(density, m, b, 1e-300, 1e-11).value;
        } else {
            total += integrate_adaptive(density, a, b, 1e-300, 1e-11).value;
        }
        a = b;
    }

    SpaceIntegral out;
    double const T = truncation_radius;
    double const dT = density(T), dT10 = density(T / 10.0);
    if (dT != 0.0) {
        if (dT10 == 0.0 || dT * dT10 < 0.0) {
            throw NumericalError("integrand tail changes sign near the truncation radius");
        }
        double const p = -std::log10(dT / dT10);
        if (!(p > 1.0)) {
            throw NumericalError("divergent tail: radial density decays like r^" + std::to_string(-p));
        }
        out.tail = dT * T / (p - 1.0);
    }
    out.value = total.value() + out.tail;
    if (std::abs(out.tail) > 0.1 * std::abs(out.value)) {
        throw NumericalError("quadrature resolution: truncation tail exceeds 10% of the value");
    }
    return out;
}

SpaceIntegral mc_space_integral(std::function<double(std::span<double const>)> const& g, int N, std::int64_t samples,
                                std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double const norm_const = unit_sphere_area(N) / N;
    std::vector<double> x(N);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        // radius: t = r / (1 + r) has density N t^{N-1} on (0, 1)
        double const t = std::pow(uni(rng), 1.0 / N);
        double const r = t / (1.0 - t);
        double len = 0.0;
        for (auto& c : x) {
            c = gauss(rng);
            len += c * c;
        }
        len = std::sqrt(len);
        for (auto& c : x) {
            c *= r / len;
        }
        double const pdf = std::pow(1.0 + r, -(N + 1.0)) / norm_const;
        double const v = g(x) / pdf;
        double const delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    SpaceIntegral out;
    out.value = mean;
    out.stderr_mc = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
    return out;
}

HypothesisReport check_V_hypotheses(Potential const& pot, int N, double S, PotentialQuadSpec const& quad)
{
    HypothesisReport report;
    double const half = 0.5 * N;
    double const crit = 2.0 * N / (N - 2.0);
    double const keep = 1.0 - quad.margin;

    auto integral = [&](auto const& piece) -> SpaceIntegral {
        if (pot.is_radial()) {
            return radial_space_integral(
                [&](double r) {
                    std::vector<double> x(N, 0.0);
                    x[0] = r;
                    return std::pow(std::abs(piece(std::span<double const>(x))), half);
                },
                N, quad.truncation_radius);
        }
        return mc_space_integral([&](std::span<double const> x) { return std::pow(std::abs(piece(x)), half); }, N,
                                 quad.mc_samples, quad.seed);
    };
    auto strict_less = [&](SpaceIntegral const& v, double threshold) {
        return v.value + 3.0 * v.stderr_mc < threshold * keep;
    };

    auto const vminus = integral([&](auto x) { return pot.V_minus(x); });
    double const t1 = std::pow(S, half);
    report.add("V1_negative_part", vminus.value, t1, strict_less(vminus, t1), "int |V-|^{N/2} < S^{N/2}");

    // (V2): fitted envelope constants on a log sample of radii and random directions
    double A0 = 0.0, A1 = 0.0, A3 = 0.0;
    std::mt19937_64 rng(quad.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(N);
    double tail_V = 0.0, tail_gd = 0.0, tail_hq = 0.0;
    for (double lr = -3.0; lr <= std::log10(quad.truncation_radius) + 1e-12; lr += 0.01) {
        double const r = std::pow(10.0, lr);
        int const directions = pot.is_radial() ? 1 : 8;
        for (int d = 0; d < directions; ++d) {
            double len = 0.0;
            for (auto& c : x) {
                c = pot.is_radial() ? 0.0 : gauss(rng);
                len += c * c;
            }
            if (pot.is_radial()) {
                x[0] = r;
            } else {
                for (auto& c : x) {
                    c *= r / std::sqrt(len);
                }
            }
            double const env = std::pow(1.0 + r, pot.k());
            double const v = pot.V(x), gd = pot.grad_dot(x), hq = pot.hess_quad(x);
            A0 = std::max(A0, std::abs(v) * env);
            A1 = std::max(A1, std::abs(gd) * env);
            A3 = std::max(A3, std::abs(hq));
            if (lr > std::log10(quad.truncation_radius) - 1.0) {
                tail_V = std::max(tail_V, std::abs(v));
                tail_gd = std::max(tail_gd, std::abs(gd));
                tail_hq = std::max(tail_hq, std::abs(hq));
            }
        }
    }
    bool const k_ok = pot.k() > std::max(2.0, N - 2.0);
    report.add("V2_k_range", pot.k(), std::max(2.0, N - 2.0), k_ok, "k > max{2, N-2}");
    report.add("V2_decay_A0", A0, pot.A0(), std::isfinite(A0) && A0 <= pot.A0() * (1.0 + 1e-9),
               "sup |V| (1+|x|)^k");
    report.add("V2_decay_A1", A1, pot.A1(), std::isfinite(A1) && A1 <= pot.A1() * (1.0 + 1e-9),
               "sup |grad V . x| (1+|x|)^k");
    report.add("V2_tail_vanishing", std::max(tail_V, tail_gd), 1e-6, std::max(tail_V, tail_gd) < 1e-6,
               "max |V|, |grad V . x| over the last sampled decade");

    auto const wplus = integral([&](auto x) { return pot.W_plus(x); });
    report.add("V3_W_plus", wplus.value, t1, strict_less(wplus, t1), "int |W+|^{N/2} < S^{N/2}");

    auto const zminus = integral([&](auto x) { return pot.Z_minus(x, N); });
    double const t4 = std::pow(S / crit, half);
    report.add("V4_Z_minus", zminus.value, t4, strict_less(zminus, t4), "int |Z-|^{N/2} < (S/2*)^{N/2}");

    auto const hess = integral([&](auto x) { return pot.hess_quad(x); });
    report.add("V5_hessian_integrable", hess.value, std::numeric_limits<double>::infinity(), std::isfinite(hess.value),
               "int |xHx|^{N/2} finite");
    report.add("V5_hessian_decay", tail_hq, 1e-6, tail_hq < 1e-6, "max |xHx| over the last sampled decade");
    report.add("V5_hessian_bound_A3", A3, std::numeric_limits<double>::infinity(), std::isfinite(A3),
               "sup |xHx|");
    auto const kplus = integral([&](auto x) { return pot.K_plus(x, N); });
    double const t5 = std::pow(2.0 * S / crit, half);
    report.add("V5_K_plus", kplus.value, t5, strict_less(kplus, t5), "int |K+|^{N/2} < (2S/2*)^{N/2}");
    return report;
}

} // namespace pohozaev
