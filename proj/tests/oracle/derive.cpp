// Independent reference values for the test suite. Shares no code with the library:
// closed-form model functions, fixed-step RK4 shooting and plain Gauss/Simpson rules.
//
//   derive            print the values
//   derive --check    compare against tests/frozen.hpp and exit nonzero on mismatch

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>

#include "../frozen.hpp"

namespace {

double const pi = std::numbers::pi;

double f_model(double s)
{
    double const a = std::abs(s);
    double const v = (2 * std::pow(a, 11) - 4 * std::sqrt(2.0) * std::pow(a, 9) + 4 * std::pow(a, 7)) /
                     (std::pow(a, 10) + 1);
    return s < 0 ? -v : v;
}

double fprime_model(double s)
{
    double const a = std::abs(s);
    double const n = 2 * std::pow(a, 11) - 4 * std::sqrt(2.0) * std::pow(a, 9) + 4 * std::pow(a, 7);
    double const dn = 22 * std::pow(a, 10) - 36 * std::sqrt(2.0) * std::pow(a, 8) + 28 * std::pow(a, 6);
    double const d = std::pow(a, 10) + 1, dd = 10 * std::pow(a, 9);
    return (dn * d - n * dd) / (d * d);
}

// 20-point Gauss-Legendre on [a, b], composite over m panels
double gauss(std::function<double(double)> const& g, double a, double b, int m = 8)
{
    static double const x[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
                                 0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
                                 0.9639719272779138, 0.9931285991850949};
    static double const w[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
                                 0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
                                 0.0406014298003869, 0.0176140071391521};
    double sum = 0.0, h = (b - a) / m;
    for (int p = 0; p < m; ++p) {
        double const c = a + (p + 0.5) * h, r = 0.5 * h;
        for (int i = 0; i < 10; ++i) {
            sum += w[i] * r * (g(c - r * x[i]) + g(c + r * x[i]));
        }
    }
    return sum;
}

double F_model(double s)
{
    return gauss(f_model, 0.0, s, 4);
}

// Rayleigh quotient of the bubble (1 + r^2)^{-1/2} in R^3 via r = tan(t)
double sobolev_oracle()
{
    auto grad = [](double t) {
        double const r = std::tan(t), j = 1.0 / (std::cos(t) * std::cos(t));
        double const du = -r * std::pow(1 + r * r, -1.5);
        return 4 * pi * du * du * r * r * j;
    };
    auto crit = [](double t) {
        double const r = std::tan(t), j = 1.0 / (std::cos(t) * std::cos(t));
        return 4 * pi * std::pow(1 + r * r, -3.0) * r * r * j;
    };
    double const G = gauss(grad, 0.0, pi / 2, 200), C = gauss(crit, 0.0, pi / 2, 200);
    return G / std::cbrt(C);
}

double A2_oracle()
{
    double best = 0.0;
    for (int i = 0; i <= 2400; ++i) {
        double const s = std::pow(10.0, -6.0 + i / 200.0);
        best = std::max({best, std::abs(f_model(s)) / std::pow(s, 5), std::abs(fprime_model(s)) / std::pow(s, 4)});
        if (s < 1e3) {
            best = std::max(best, std::abs(F_model(s)) / std::pow(s, 6));
        }
    }
    return best;
}

double kplus_oracle()
{
    // 4 pi int_3^inf (r (1+r)^-5 (r-3))^{3/2} r^2 dr with r = 3 + t / (1 - t)
    auto g = [](double t) {
        if (t >= 1.0) {
            return 0.0;
        }
        double const r = 3 + t / (1 - t), j = 1 / ((1 - t) * (1 - t));
        double const k = r * std::pow(1 + r, -5) * (r - 3);
        return 4 * pi * std::pow(k, 1.5) * r * r * j;
    };
    return gauss(g, 0.0, 1.0, 400);
}

struct Shot
{
    bool crossed = false;
    double asymptote = 0.0;
    double G = 0.0, Fint = 0.0, tail_b = 0.0;
};

Shot shoot(double u0, bool with_integrals)
{
    double r = 1e-4;
    double w = u0 - f_model(u0) * r * r / 6, p = -f_model(u0) * r / 3;
    double const r_max = 2000.0;
    Shot out;
    auto rhs = [](double r, double w, double p, double& dw, double& dp) {
        dw = p;
        dp = -2.0 / r * p - f_model(w);
    };
    double Gsum = 0.0, Fsum = 0.0;
    double prev_g = p * p * r * r, prev_F = with_integrals ? F_model(w) * r * r : 0.0;
    while (r < r_max) {
        double const h = std::min(2e-3 * (1 + r), r_max - r);
        double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p;
        rhs(r, w, p, k1w, k1p);
        rhs(r + h / 2, w + h / 2 * k1w, p + h / 2 * k1p, k2w, k2p);
        rhs(r + h / 2, w + h / 2 * k2w, p + h / 2 * k2p, k3w, k3p);
        rhs(r + h, w + h * k3w, p + h * k3p, k4w, k4p);
        w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += h;
        if (w < 0.0) {
            out.crossed = true;
            return out;
        }
        if (with_integrals) {
            double const g = p * p * r * r, Fv = F_model(w) * r * r;
            Gsum += 0.5 * h * (prev_g + g);
            Fsum += 0.5 * h * (prev_F + Fv);
            prev_g = g;
            prev_F = Fv;
        }
    }
    out.asymptote = w + r * p;
    out.tail_b = -r * r * p;
    // tail w ~ b / r: int |w'|^2 = 4 pi b^2 / r_max
    out.G = 4 * pi * (Gsum + out.tail_b * out.tail_b / r_max);
    out.Fint = 4 * pi * Fsum;
    return out;
}

struct Ground
{
    double u0, G, Fint, m;
};

Ground ground_oracle()
{
    double lo = 0.5, hi = 1.1;
    for (int i = 0; i < 48; ++i) {
        double const mid = 0.5 * (lo + hi);
        auto const s = shoot(mid, false);
        if (s.crossed || s.asymptote < 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    auto const s = shoot(lo, true);
    return {lo, s.G, s.Fint, s.G / 3.0};
}

int report(char const* name, double derived, double frozen, double rel)
{
    bool const ok = std::abs(derived - frozen) <= rel * std::abs(frozen);
    std::printf("%-24s derived %.12g  frozen %.12g  %s\n", name, derived, frozen, ok ? "ok" : "MISMATCH");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    bool const check = argc > 1 && std::strcmp(argv[1], "--check") == 0;
    double const S = sobolev_oracle();
    double const A2 = A2_oracle();
    double const rho = std::pow(S * S * S / (2 * 6 * A2), 0.25);
    double const K = kplus_oracle();
    auto const g = ground_oracle();
    int bad = 0;
    bad += report("sobolev_S3", S, frozen::sobolev_S3, 1e-9);
    bad += report("A2", A2, frozen::A2, 1e-3);
    bad += report("rho", rho, frozen::rho, 1e-3);
    bad += report("kplus_integral", K, frozen::kplus_integral, 1e-6);
    bad += report("ground_u0", g.u0, frozen::ground_u0, 1e-6);
    bad += report("ground_grad_norm_sq", g.G, frozen::ground_grad_norm_sq, 1e-4);
    bad += report("ground_F_integral", g.Fint, frozen::ground_F_integral, 1e-4);
    bad += report("ground_m", g.m, frozen::ground_m, 1e-4);
    return check && bad ? 1 : 0;
}
