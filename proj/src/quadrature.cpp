#include "pohozaev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace pohozaev {

double unit_sphere_area(int n)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

GaussRule gauss_legendre(int order)
{
    if (order < 1) {
        throw std::invalid_argument("gauss_legendre: order must be positive");
    }
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a, b;
    QuadResult r;
    bool operator<(Panel const& o) const { return r.error < o.r.error; }
};

} // namespace

QuadResult gauss_kronrod15(std::function<double(double)> const& f, double a, double b)
{
    double const c = 0.5 * (a + b);
    double const h = 0.5 * (b - a);
    double const fc = f(c);
    double kron = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double const dx = h * xgk[j];
        double const f1 = f(c - dx);
        double const f2 = f(c + dx);
        kron += wgk[j] * (f1 + f2);
        if (j % 2 == 1) {
            gauss += wg[j / 2] * (f1 + f2);
        }
    }
    QuadResult res;
    res.value = kron * h;
    res.error = std::abs((kron - gauss) * h);
    res.evaluations = 15;
    return res;
}

QuadResult integrate_adaptive(std::function<double(double)> const& f, double a, double b, double abs_tol,
                              double rel_tol, int max_panels)
{
    if (a == b) {
        return {};
    }
    std::priority_queue<Panel> heap;
    Panel first{a, b, gauss_kronrod15(f, a, b)};
    double total = first.r.value;
    double err = first.r.error;
    int evals = first.r.evaluations;
    heap.push(first);
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && static_cast<int>(heap.size()) < max_panels) {
        Panel p = heap.top();
        heap.pop();
        double const m = 0.5 * (p.a + p.b);
        Panel left{p.a, m, gauss_kronrod15(f, p.a, m)};
        Panel right{m, p.b, gauss_kronrod15(f, m, p.b)};
        total += left.r.value + right.r.value - p.r.value;
        err += left.r.error + right.r.error - p.r.error;
        evals += 30;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to avoid drift from the incremental updates
    CompensatedSum sum, esum;
    while (!heap.empty()) {
        sum += heap.top().r.value;
        esum += heap.top().r.error;
        heap.pop();
    }
    return {sum.value(), esum.value(), evals};
}

QuadResult integrate_adaptive_semi_infinite(std::function<double(double)> const& f, double a, double abs_tol,
                                            double rel_tol)
{
    auto mapped = [&](double t) {
        if (t >= 1.0) {
            return 0.0;
        }
        double const u = 1.0 - t;
        return f(a + t / u) / (u * u);
    };
    return integrate_adaptive(mapped, 0.0, 1.0, abs_tol, rel_tol, 4000);
}

void CompensatedSum::add(double x) noexcept
{
    double const t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<double const> nodes, int max_order)
{
    int const n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int const mn = std::min(i, max_order);
        double c2 = 1.0;
        double const c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            double const c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

double student_t975(std::size_t dof)
{
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                       2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                       2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof == 0) {
        return std::numeric_limits<double>::infinity();
    }
    if (dof <= 30) {
        return table[dof - 1];
    }
    return 1.96;
}

LineFit fit_line(std::span<double const> x, std::span<double const> y, std::span<double const> weights)
{
    std::size_t const n = x.size();
    if (n < 2 || y.size() != n || (!weights.empty() && weights.size() != n)) {
        throw std::invalid_argument("fit_line: need at least two matching points");
    }
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double const w = weights.empty() ? 1.0 : weights[i];
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
    }
    double const mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double const w = weights.empty() ? 1.0 : weights[i];
        sxx += w * (x[i] - mx) * (x[i] - mx);
        sxy += w * (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double const w = weights.empty() ? 1.0 : weights[i];
            double const r = y[i] - fit.intercept - fit.slope * x[i];
            rss += w * r * r;
        }
        double const sigma2 = rss / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(sigma2 / sxx);
        fit.band95 = student_t975(n - 2) * fit.slope_stderr;
    }
    return fit;
}

LineFit fit_loglog(std::span<double const> x, std::span<double const> y)
{
    std::vector<double> lx(x.size()), ly(y.size());
    std::transform(x.begin(), x.end(), lx.begin(), [](double v) { return std::log(v); });
    std::transform(y.begin(), y.end(), ly.begin(), [](double v) { return std::log(std::abs(v)); });
    return fit_line(lx, ly);
}

LineFit fit_loglog_weighted(std::span<double const> x, std::span<double const> y, std::span<double const> err,
                            double floor)
{
    std::vector<double> lx(x.size()), ly(y.size()), wt(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
        double const rel = err.empty() ? 0.0 : err[i] / std::abs(y[i]);
        wt[i] = 1.0 / (rel * rel + floor * floor);
    }
    return fit_line(lx, ly, wt);
}

} // namespace pohozaev
